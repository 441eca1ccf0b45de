use serde::{Deserialize, Serialize};

use crate::monoid::Monoid;
use crate::twocat::{Finite2Category, TwoCategoryFile};

/// A 2-cell `(a, f): f ⇒ g` of `A(M)`, with 1-cells as automorphism indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Aut2Cell {
    pub source: usize,
    pub target: usize,
    pub element: usize,
}

/// One object, one 1-cell, 2-cells the elements of `M` with vertical and
/// horizontal composition both the product. A noncommutative `M` is replaced
/// by its center.
pub fn build_z(m: &Monoid) -> Finite2Category {
    let m = if m.is_commutative() { m.clone() } else { m.center() };
    let k = m.size();
    let mut product = Vec::with_capacity(k * k);
    for b in 0..k {
        for a in 0..k {
            product.push([b, a, m.op(b, a)]);
        }
    }
    let file = TwoCategoryFile {
        objects: 1,
        one_cells: vec![[0, 0]],
        one_identities: vec![0],
        one_composition: vec![[0, 0, 0]],
        two_cells: vec![[0, 0]; k],
        two_identities: vec![m.unit()],
        vertical: product.clone(),
        horizontal: product,
    };
    Finite2Category::from_file(&file).expect("Z(M) tables are well formed")
}

/// One object, 1-cells the automorphisms of `M`, and 2-cells `f ⇒ g` the
/// elements `a` with `m·a = a·f(g⁻¹(m))` for every `m`.
///
/// Returns the 2-category together with the automorphisms (as permutations)
/// and the 2-cell labels, both in index order.
pub fn build_a(m: &Monoid) -> (Finite2Category, Vec<Vec<usize>>, Vec<Aut2Cell>) {
    let autos = m.automorphisms();
    let size = m.size();
    let r = autos.len();
    let pos = |perm: &Vec<usize>| autos.iter().position(|a| a == perm).expect("closed under composition");
    let inverse = |f: &Vec<usize>| {
        let mut inv = vec![0; size];
        for (a, &b) in f.iter().enumerate() {
            inv[b] = a;
        }
        inv
    };
    // f'f = f' ∘ f
    let compose = |f2: usize, f: usize| pos(&(0..size).map(|a| autos[f2][autos[f][a]]).collect());

    let mut cells = Vec::new();
    for f in 0..r {
        for g in 0..r {
            let g_inv = inverse(&autos[g]);
            for a in 0..size {
                if (0..size).all(|x| m.op(x, a) == m.op(a, autos[f][g_inv[x]])) {
                    cells.push(Aut2Cell { source: f, target: g, element: a });
                }
            }
        }
    }
    let cell_pos = |c: Aut2Cell| cells.binary_search(&c).expect("2-cell exists");

    let mut one_composition = Vec::new();
    for f2 in 0..r {
        for f in 0..r {
            one_composition.push([f2, f, compose(f2, f)]);
        }
    }
    let mut vertical = Vec::new();
    let mut horizontal = Vec::new();
    for (bi, b) in cells.iter().enumerate() {
        for (ai, a) in cells.iter().enumerate() {
            // (b, g)·(a, f) = (ba, f)
            if a.target == b.source {
                let c = Aut2Cell { source: a.source, target: b.target, element: m.op(b.element, a.element) };
                vertical.push([bi, ai, cell_pos(c)]);
            }
            // (b, f ⇒ g)(a, f' ⇒ g') = (b·f(a), ff' ⇒ gg')
            let c = Aut2Cell {
                source: compose(b.source, a.source),
                target: compose(b.target, a.target),
                element: m.op(b.element, autos[b.source][a.element]),
            };
            horizontal.push([bi, ai, cell_pos(c)]);
        }
    }
    let file = TwoCategoryFile {
        objects: 1,
        one_cells: vec![[0, 0]; r],
        one_identities: vec![0],
        one_composition,
        two_cells: cells.iter().map(|c| [c.source, c.target]).collect(),
        two_identities: (0..r)
            .map(|f| cell_pos(Aut2Cell { source: f, target: f, element: m.unit() }))
            .collect(),
        vertical,
        horizontal,
    };
    let x = Finite2Category::from_file(&file).expect("A(M) tables are well formed");
    (x, autos, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twocat::{kan_criterion, validate_2category};

    #[test]
    fn z_of_small_monoids() {
        let z = build_z(&Monoid::trivial());
        assert_eq!((z.object_count(), z.one_cell_count(), z.two_cell_count()), (1, 1, 1));
        let b = build_z(&Monoid::binary());
        assert_eq!(b.two_cell_count(), 2);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(b.vcomp(x, y), Some(Monoid::binary().op(x, y)));
            }
        }
        assert!(validate_2category(&b).is_pass());
        let k = kan_criterion(&build_z(&Monoid::cyclic(3)));
        assert!(k.two_cells_invertible && k.one_cells_equivalences);
    }

    #[test]
    fn z_of_noncommutative_monoid_uses_center() {
        let z = build_z(&Monoid::symmetric_group(3));
        assert_eq!(z.two_cell_count(), 1);
    }

    #[test]
    fn a_of_trivial_is_z_of_trivial() {
        assert_eq!(build_a(&Monoid::trivial()).0, build_z(&Monoid::trivial()));
    }

    #[test]
    fn a_of_z2_has_both_elements_as_2_cells() {
        let (x, autos, cells) = build_a(&Monoid::cyclic(2));
        assert_eq!(autos.len(), 1);
        assert_eq!(cells.iter().map(|c| c.element).collect::<Vec<_>>(), vec![0, 1]);
        assert!(validate_2category(&x).is_pass());
    }

    #[test]
    fn a_of_z3_matches_brute_force_filter() {
        let m = Monoid::cyclic(3);
        let (x, autos, cells) = build_a(&m);
        assert_eq!(autos, vec![vec![0, 1, 2], vec![0, 2, 1]]);
        // additive, so m + a = a + f(g⁻¹ m) forces f = g; every a qualifies
        let mut expected = Vec::new();
        for f in 0..2 {
            for a in 0..3 {
                expected.push(Aut2Cell { source: f, target: f, element: a });
            }
        }
        assert_eq!(cells, expected);
        assert!(validate_2category(&x).is_pass());
        let k = kan_criterion(&x);
        assert!(k.two_cells_invertible && k.one_cells_equivalences);
    }

    #[test]
    fn a_of_noncommutative_group_validates() {
        let (x, autos, _) = build_a(&Monoid::symmetric_group(3));
        assert_eq!(autos.len(), 6);
        assert!(validate_2category(&x).is_pass());
    }
}
