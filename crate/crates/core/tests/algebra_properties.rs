use ltk_core::gamma::{gamma_basis, primitive_basis, sq_right};
use ltk_core::lambda::{Normalizer, Strategy as Rewrite};
use ltk_core::transfer::{psi, Psi};
use ltk_core::{Bidegree, GammaElement, GammaMonomial, Homology, LambdaElement, LambdaMonomial};
use proptest::collection::vec;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = LambdaMonomial> {
    vec(0u32..=30, 1..=5).prop_map(LambdaMonomial::new)
}

/// Arbitrary sums of words, not necessarily admissible or homogeneous.
fn lambda_element() -> impl Strategy<Value = LambdaElement> {
    vec(word(), 0..=4).prop_map(LambdaElement::from_terms)
}

fn gamma_element() -> impl Strategy<Value = GammaElement> {
    (1usize..=4).prop_flat_map(|rank| {
        vec(vec(0u32..=10, rank), 0..=5).prop_map(move |ms| {
            GammaElement::from_terms(rank, ms.into_iter().map(GammaMonomial::new)).unwrap()
        })
    })
}

/// Homogeneous rank-`s` elements of one degree.
fn homogeneous_gamma() -> impl Strategy<Value = (GammaElement, GammaElement)> {
    (1usize..=4, 0u32..=14).prop_flat_map(|(rank, d)| {
        let basis = gamma_basis(rank, d);
        let n = basis.len();
        let pick = move |ix: Vec<usize>| {
            GammaElement::from_terms(rank, ix.into_iter().map(|i| basis[i].clone())).unwrap()
        };
        let pick2 = pick.clone();
        (vec(0..n, 0..=4).prop_map(pick), vec(0..n, 0..=4).prop_map(pick2))
    })
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn differential_squares_to_zero(x in lambda_element()) {
        let mut n = Normalizer::new();
        let dx = n.differential(&x);
        prop_assert!(n.differential(&dx).is_zero());
    }

    #[test]
    fn leibniz_rule(x in lambda_element(), y in lambda_element()) {
        let mut n = Normalizer::new();
        let xy = n.product(&x, &y);
        let lhs = n.differential(&xy);
        let dx = n.differential(&x);
        let dy = n.differential(&y);
        let rhs = &n.product(&dx, &y) + &n.product(&x, &dy);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_is_idempotent_and_admissible(x in lambda_element()) {
        let mut n = Normalizer::new();
        let once = n.normalize(&x);
        prop_assert!(once.is_normalized());
        prop_assert_eq!(n.normalize(&once), once);
    }

    #[test]
    fn rewriting_order_does_not_matter(x in lambda_element()) {
        let left = Normalizer::with_strategy(Rewrite::Leftmost).normalize(&x);
        let right = Normalizer::with_strategy(Rewrite::Rightmost).normalize(&x);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn normal_form_is_linear(x in lambda_element(), y in lambda_element()) {
        let mut n = Normalizer::new();
        let sum = n.normalize(&(&x + &y));
        prop_assert_eq!(sum, &n.normalize(&x) + &n.normalize(&y));
    }

    #[test]
    fn sq0_commutes_with_differential(x in lambda_element()) {
        let mut n = Normalizer::new();
        let dx = n.differential(&x);
        let sx = n.sq0(&x);
        let a = n.sq0(&dx);
        let b = n.differential(&sx);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sq0_is_multiplicative(x in lambda_element(), y in lambda_element()) {
        let mut n = Normalizer::new();
        let xy = n.product(&x, &y);
        let lhs = n.sq0(&xy);
        let (sx, sy) = (n.sq0(&x), n.sq0(&y));
        prop_assert_eq!(lhs, n.product(&sx, &sy));
    }

    #[test]
    fn right_action_adem_relations(x in gamma_element()) {
        prop_assert!(sq_right(&sq_right(&x, 1), 1).is_zero());
        prop_assert_eq!(sq_right(&sq_right(&x, 1), 2), sq_right(&x, 3));
        prop_assert_eq!(sq_right(&sq_right(&x, 2), 2), sq_right(&sq_right(&x, 3), 1));
        prop_assert_eq!(sq_right(&x, 0), x);
    }

    #[test]
    fn right_action_is_unstable((x, _) in homogeneous_gamma(), i in 1u32..=10) {
        let d = x.degree().unwrap().unwrap_or(0);
        if 2 * i > d {
            prop_assert!(sq_right(&x, i).is_zero());
        }
    }

    #[test]
    fn psi_is_linear_and_preserves_bidegree((x, y) in homogeneous_gamma()) {
        let mut p = Psi::new();
        let px = p.psi(&x);
        let py = p.psi(&y);
        prop_assert_eq!(p.psi(&(&x + &y)), &px + &py);
        if let Some(d) = x.degree().unwrap() {
            if let Some(b) = px.bidegree().unwrap() {
                prop_assert_eq!(b, Bidegree::new(x.rank() as u32, d));
            }
        }
        prop_assert!(px.is_normalized());
    }

    #[test]
    fn homology_relation_is_an_equivalence(
        pick in 0usize..4,
        y1 in vec(0usize..64, 0..=3),
        y2 in vec(0usize..64, 0..=3),
    ) {
        let classes: [&[u32]; 4] = [&[3, 3, 2], &[1, 1, 7], &[0, 0, 0], &[0, 3, 7]];
        let c = LambdaElement::from(LambdaMonomial::new(classes[pick].iter().copied()));
        let b = c.bidegree().unwrap().unwrap();
        let mut h = Homology::new();
        let prev = h.slice(b).unwrap().prev_basis.clone();
        prop_assume!(!prev.is_empty());
        let mut perturbed = |ix: &[usize]| {
            let y: LambdaElement = ix.iter().map(|&i| prev[i % prev.len()].clone()).collect();
            let dy = h.differential(&y);
            &c + &dy
        };
        let x1 = perturbed(&y1);
        let x2 = perturbed(&y2);
        prop_assert!(h.same_class(&x1, &x1).unwrap().is_some());
        let w12 = h.same_class(&x1, &x2).unwrap();
        let w21 = h.same_class(&x2, &x1).unwrap();
        prop_assert!(w12.is_some() && w21.is_some());
        prop_assert_eq!(h.differential(&w12.unwrap()), h.normalize(&(&x1 + &x2)));
        prop_assert!(h.same_class(&x1, &c).unwrap().is_some());
    }
}

#[test]
fn psi_maps_primitives_to_cycles() {
    let mut p = Psi::new();
    let mut h = Homology::new();
    let mut checked = 0;
    for s in 1..=5 {
        for d in 0..=24 {
            for theta in primitive_basis(s, d) {
                let image = p.psi(&theta);
                assert!(h.is_cycle(&image).unwrap(), "psi({theta}) is not a cycle");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000, "only {checked} primitives");
}

#[test]
fn psi_examples() {
    let a3 = GammaElement::monomial(GammaMonomial::new([3]));
    assert_eq!(psi(&a3), LambdaElement::generator(3));
}
