use ltk::io::{parse_document, serialize_document, ElementDocument};
use ltk_core::{GammaElement, GammaMonomial, LambdaElement, LambdaMonomial};
use proptest::prelude::*;

fn lambda() -> impl Strategy<Value = LambdaElement> {
    prop::collection::vec(prop::collection::vec(0u32..40, 1..6), 0..6)
        .prop_map(|ws| ws.into_iter().map(LambdaMonomial::new).collect())
}

fn gamma() -> impl Strategy<Value = GammaElement> {
    (1usize..6).prop_flat_map(|rank| {
        prop::collection::vec(prop::collection::vec(0u32..40, rank), 0..6).prop_map(move |ms| {
            GammaElement::from_terms(rank, ms.into_iter().map(GammaMonomial::new)).unwrap()
        })
    })
}

fn document() -> impl Strategy<Value = ElementDocument> {
    prop_oneof![lambda().prop_map(ElementDocument::lambda), gamma().prop_map(ElementDocument::gamma)]
}

const ILLEGAL: &[char] = &[
    '!', '$', '%', '&', '*', '/', ';', '<', '=', '>', '?', '^', '`', '|', '~', '"', '\'', '{', '}', '-', '.', 'é',
    'λ', '∂',
];

proptest! {
    #[test]
    fn round_trip(doc in document()) {
        let text = serialize_document(&doc);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back.payload, &doc.payload);
        prop_assert_eq!(serialize_document(&back), text);
    }

    #[test]
    fn equal_elements_serialize_identically(x in lambda(), shuffle in any::<u64>()) {
        // the same terms in another order, with a pair that cancels
        let mut terms: Vec<LambdaMonomial> = x.terms().cloned().collect();
        let n = terms.len().max(1);
        terms.rotate_left((shuffle as usize) % n);
        let extra = LambdaMonomial::new([7, 7]);
        terms.push(extra.clone());
        terms.push(extra);
        let y: LambdaElement = terms.into_iter().collect();
        prop_assert_eq!(
            serialize_document(&ElementDocument::lambda(x)),
            serialize_document(&ElementDocument::lambda(y))
        );
    }

    #[test]
    fn illegal_characters_are_rejected(doc in document(), at in any::<prop::sample::Index>(), c in prop::sample::select(ILLEGAL)) {
        let text = serialize_document(&doc);
        let mut chars: Vec<char> = text.chars().collect();
        chars.insert(at.index(chars.len() + 1), c);
        let broken: String = chars.into_iter().collect();
        prop_assert!(parse_document(&broken).is_err(), "accepted {:?}", broken);
    }
}
