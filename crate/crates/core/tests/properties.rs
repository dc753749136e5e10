use num_bigint::BigInt;
use proptest::prelude::*;

use fusion_torsion::combo::ZCombo;
use fusion_torsion::module::{act_combo, pairing, StandardModule};
use fusion_torsion::ring::tensor_combo;
use fusion_torsion::rings::WreathRing;
use fusion_torsion::spec::construct_wreath;
use fusion_torsion::*;

const RINGS: &[&str] = &[
    "Z/4",
    "F(2)",
    "SUq2",
    "O+(3)",
    "U+(2)",
    "Z/2 * SUq2",
    "wreath(Z/2)",
    "wreath(O+(3))",
    "tilde(O+(3))",
    "tilde(wreath(Z/2))",
];

fn ring_and_labels(text: &str, bound: usize) -> (RingRef, Vec<Label>) {
    let ring = construct_ring(&parse_spec(text).unwrap()).unwrap();
    let labels = ring.enumerate(bound);
    (ring, labels)
}

fn pick(labels: &[Label], i: usize) -> Label {
    labels[i % labels.len()].clone()
}

fn spec_strategy() -> impl Strategy<Value = GroupSpec> {
    let leaf = prop_oneof![
        (1u32..8).prop_map(GroupSpec::Cyclic),
        (1u32..4).prop_map(GroupSpec::FreeGroup),
        Just(GroupSpec::SUq2),
        (2u32..6).prop_map(GroupSpec::OPlus),
        (2u32..4).prop_map(GroupSpec::UPlus),
        Just(GroupSpec::Circle),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| GroupSpec::FreeProduct(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| GroupSpec::Wreath(Box::new(a))),
            inner.prop_map(|a| GroupSpec::Tilde(Box::new(a), None)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn spec_display_parses_back(spec in spec_strategy()) {
        let text = spec.to_string();
        prop_assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn tensor_is_associative(r in 0..RINGS.len(), i in 0usize..500, j in 0usize..500, k in 0usize..500) {
        let (ring, labels) = ring_and_labels(RINGS[r], 3);
        let (a, b, c) = (pick(&labels, i), pick(&labels, j), pick(&labels, k));
        let left = tensor_combo(ring.as_ref(), &ring.tensor(&a, &b).unwrap(), &ZCombo::single(c.clone())).unwrap();
        let right = tensor_combo(ring.as_ref(), &ZCombo::single(a), &ring.tensor(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn frobenius_reciprocity_and_dimension(r in 0..RINGS.len(), i in 0usize..500, j in 0usize..500) {
        let (ring, labels) = ring_and_labels(RINGS[r], 3);
        let (a, b) = (pick(&labels, i), pick(&labels, j));
        let ab = ring.tensor(&a, &b).unwrap();
        prop_assert!(ab.is_nonnegative());
        let bbar = ring.conj(&b).unwrap();
        for (c, m) in ab.iter() {
            prop_assert!(ring.contains(c), "{} leaves {}", c, ring.name());
            prop_assert_eq!(ring.tensor(c, &bbar).unwrap().coeff(&a), m.clone());
        }
        let mut d = BigInt::from(0);
        for (c, m) in ab.iter() {
            d += m * ring.dim(c).unwrap();
        }
        prop_assert_eq!(d, ring.dim(&a).unwrap() * ring.dim(&b).unwrap());
    }

    #[test]
    fn lambda_is_multiplicative(base in 0usize..3, i in 0usize..500, j in 0usize..500) {
        let spec = parse_spec(["Z/2", "O+(3)", "F(1)"][base]).unwrap();
        let w: WreathRing = construct_wreath(&spec).unwrap();
        let labels = w.enumerate(3);
        let (a, b) = (pick(&labels, i), pick(&labels, j));
        let image = w.lambda_combo(&w.tensor(&a, &b).unwrap()).unwrap();
        let product = w.ambient().tensor(&w.lambda(&a).unwrap(), &w.lambda(&b).unwrap()).unwrap();
        prop_assert_eq!(image, product);
    }

    #[test]
    fn standard_pairing_is_equivariant(r in 0..4usize, i in 0usize..500, j in 0usize..500, k in 0usize..500) {
        let (ring, labels) = ring_and_labels(["Z/3", "SUq2", "O+(3)", "wreath(Z/2)"][r], 2);
        let m = StandardModule::new(ring.clone());
        let (a, j1, j2) = (pick(&labels, i), pick(&labels, j), pick(&labels, k));
        let bound = 5;
        let mut lhs = ZCombo::new();
        for (x, c) in act_combo(&m, &a, &ZCombo::single(j1.clone())).unwrap().iter() {
            lhs.add_scaled(&pairing(&m, x, &j2, bound).unwrap(), c);
        }
        let rhs = tensor_combo(ring.as_ref(), &ZCombo::single(a.clone()), &pairing(&m, &j1, &j2, bound).unwrap()).unwrap();
        let cut = bound - ring.degree(&a);
        let keep = |x: &ZCombo| x.iter().filter(|(l, _)| ring.degree(l) <= cut).map(|(l, c)| (l.clone(), c.clone())).collect::<ZCombo>();
        prop_assert_eq!(keep(&lhs), keep(&rhs));
    }

    #[test]
    fn tilde_labels_are_closed(which in 0..2usize, i in 0usize..500, j in 0usize..500) {
        let (ring, labels) = ring_and_labels(["tilde(O+(3))", "tilde(wreath(Z/2))"][which], 4);
        let (a, b) = (pick(&labels, i), pick(&labels, j));
        for (c, _) in ring.tensor(&a, &b).unwrap().iter() {
            prop_assert!(ring.contains(c));
        }
        prop_assert!(ring.contains(&ring.conj(&a).unwrap()));
    }
}
