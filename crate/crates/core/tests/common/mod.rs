#![allow(dead_code)]

use rhombus::category::{nerve, FiniteCategory};
use rhombus::km2::{build_a, km2_truncation};
use rhombus::monoid::{commutative_monoids, Monoid};
use rhombus::simplicial::{point, standard_simplex};
use rhombus::twocat::{duskin_nerve, Finite2Category};
use rhombus::{Budget, TruncatedSimplicialSet};

/// A non-group commutative monoid of order 3 (the first in canonical order).
pub fn order3_nongroup() -> Monoid {
    commutative_monoids(3)
        .into_iter()
        .find(|m| rhombus::monoid::is_group(m).is_err())
        .unwrap()
}

pub fn categories() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("poset 0<1", FiniteCategory::chain_poset(2)),
        ("poset 0<1<2", FiniteCategory::chain_poset(3)),
        ("{0,1}", FiniteCategory::from_monoid(&Monoid::binary())),
        ("Z/2", FiniteCategory::from_monoid(&Monoid::cyclic(2))),
        ("Z/3", FiniteCategory::from_monoid(&Monoid::cyclic(3))),
        ("S3", FiniteCategory::from_monoid(&Monoid::symmetric_group(3))),
        (
            "poset 0<1 + Z/2",
            FiniteCategory::chain_poset(2).disjoint_union(&FiniteCategory::from_monoid(&Monoid::cyclic(2))),
        ),
        ("order 3 monoid", FiniteCategory::from_monoid(&order3_nongroup())),
    ]
}

/// Simplicial sets the property checks run over, all of height at least 3.
pub fn corpus() -> Vec<(String, TruncatedSimplicialSet)> {
    let b = Budget::default();
    let mut out: Vec<(String, TruncatedSimplicialSet)> = vec![
        ("point".into(), point(3)),
        ("simplex 1".into(), standard_simplex(1, 3)),
        ("simplex 2".into(), standard_simplex(2, 3)),
    ];
    for (name, c) in categories() {
        out.push((format!("nerve {name}"), nerve(&c, 3)));
    }
    for (name, m) in [("trivial", Monoid::trivial()), ("Z/2", Monoid::cyclic(2)), ("{0,1}", Monoid::binary())] {
        out.push((format!("K({name},2)"), km2_truncation(&m, 4, b).unwrap()));
    }
    out.push(("K(order 3 monoid,2)".into(), km2_truncation(&order3_nongroup(), 3, b).unwrap()));
    for (name, m) in [("Z/3", Monoid::cyclic(3)), ("{0,1}", Monoid::binary())] {
        out.push((format!("Duskin A({name})"), duskin_nerve(&build_a(&m).0, 3, b).unwrap()));
    }
    let ld = Finite2Category::locally_discrete(&FiniteCategory::chain_poset(2));
    out.push(("Duskin locally discrete 0<1".into(), duskin_nerve(&ld, 3, b).unwrap()));
    out
}

/// Every `(n, p, q)` with `2 <= n <= max` and `0 <= p < q <= n`.
pub fn rhombi(max: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for n in 2..=max {
        for q in 1..=n {
            for p in 0..q {
                v.push((n, p, q));
            }
        }
    }
    v
}
