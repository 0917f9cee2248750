use std::collections::BTreeSet;

use num_bigint::BigUint;

use triweb_core::diffset::{
    is_standard, presentation_from_difference_set, singer_difference_set, standardize, verify_planar_difference_set,
};
use triweb_core::geometry::{count_subspaces, plane_from_difference_set, q_binomial, verify_plane_axioms};
use triweb_core::presentation::{builtin_exotic_15_1, degenerate};
use triweb_core::{FunctorContext, GaloisField, PrimeField, Rationals, TrianglePresentation};

/// Subspaces of GF(q)³ of dimension `k` (1 or 2), enumerated as sets of
/// vectors spanned by every independent spanning family.
fn brute_force_subspaces(q: u64, k: usize) -> usize {
    let (p, e) = triweb_core::gf::prime_power(q).unwrap();
    let f = GaloisField::new(p, e as usize, None).unwrap();
    let scalars: Vec<_> = f.elements().collect();
    let vectors: Vec<[u64; 3]> = (1..q * q * q).map(|i| [i % q, (i / q) % q, i / (q * q)]).collect();
    let combine = |a: &[u64; 3], s: &triweb_core::GfElem, b: &[u64; 3], t: &triweb_core::GfElem| -> [u64; 3] {
        let mut out = [0; 3];
        for c in 0..3 {
            let x = f.mul(s, &f.from_index(a[c]));
            let y = f.mul(t, &f.from_index(b[c]));
            out[c] = f.index_of(&f.add(&x, &y));
        }
        out
    };
    let zero = f.zero();
    let span = |a: &[u64; 3], b: Option<&[u64; 3]>| -> BTreeSet<[u64; 3]> {
        let mut set = BTreeSet::new();
        for s in &scalars {
            match b {
                None => {
                    set.insert(combine(a, s, a, &zero));
                }
                Some(b) => {
                    for t in &scalars {
                        set.insert(combine(a, s, b, t));
                    }
                }
            }
        }
        set
    };
    let mut found = BTreeSet::new();
    for (i, a) in vectors.iter().enumerate() {
        if k == 1 {
            found.insert(span(a, None));
            continue;
        }
        for b in &vectors[i + 1..] {
            let s = span(a, Some(b));
            if s.len() as u64 == q * q {
                found.insert(s);
            }
        }
    }
    found.len()
}

#[test]
fn subspace_counts_match_brute_force() {
    for q in [2u64, 3, 4, 5] {
        for k in 1..=2usize {
            let want = brute_force_subspaces(q, k);
            assert_eq!(q_binomial(3, k as i64, q), BigUint::from(want), "q={q} k={k}");
            assert_eq!(count_subspaces(3, k as u64, q).unwrap(), BigUint::from(want));
        }
    }
    assert_eq!(brute_force_subspaces(7, 1), 57);
}

#[test]
fn standardization_regressions() {
    let d = standardize(21, 4, &[0, 1, 4, 14, 16]).unwrap();
    assert_eq!(d.set, [7, 9, 14, 15, 18]);
    assert!(is_standard(21, 2, &d.set));
    let d = standardize(57, 7, &[1, 6, 7, 9, 19, 38, 42, 49]).unwrap();
    assert_eq!(d.set, [1, 6, 7, 9, 19, 38, 42, 49]);
    assert!(is_standard(57, 7, &d.set));
}

#[test]
fn singer_sets_are_planar_and_standardizable() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let d = singer_difference_set(q).unwrap();
        let modulus = q * q + q + 1;
        assert_eq!(d.modulus, modulus);
        let mut residues = BTreeSet::new();
        for a in &d.set {
            for b in &d.set {
                if a != b {
                    assert!(residues.insert((a + modulus - b) % modulus), "q={q} repeats a difference");
                }
            }
        }
        assert_eq!(residues.len() as u64, modulus - 1);
        assert!(verify_planar_difference_set(modulus, &d.set).valid);
        let plane = plane_from_difference_set(modulus, &d.set).unwrap();
        assert!(verify_plane_axioms(&plane, false).unwrap().all_pass());
    }
}

fn translates(modulus: u64, set: &[u64]) -> usize {
    (0..modulus)
        .map(|s| set.iter().map(|d| (d + s) % modulus).collect::<BTreeSet<_>>())
        .collect::<BTreeSet<_>>()
        .len()
}

fn check_dims<K: triweb_core::ScalarField>(ctx: &FunctorContext<K>, q: u64) {
    let n = ctx.n();
    for a in 0..=n {
        assert_eq!(BigUint::from(ctx.dim(a)), q_binomial(n as i64, a as i64, q), "a={a}");
    }
}

#[test]
fn functor_dimensions_follow_q_binomials() {
    let planes: [(u64, u64, &[u64], u64); 3] = [
        (13, 3, &[0, 1, 3, 9], 2),
        (21, 4, &[0, 1, 4, 14, 16], 3),
        (57, 7, &[1, 6, 7, 9, 19, 38, 42, 49], 2),
    ];
    for (modulus, q, set, p) in planes {
        let d = standardize(modulus, q, set).unwrap();
        let tp = presentation_from_difference_set(modulus, q, &d.set).unwrap();
        let ctx = FunctorContext::new(tp, PrimeField::new(p).unwrap()).unwrap();
        check_dims(&ctx, q);
        assert_eq!(ctx.dim(1) as u64, modulus);
        assert_eq!(ctx.dim(2), translates(modulus, &d.set));
        assert_eq!(ctx.dim(1), brute_force_subspaces(q, 1));
    }
    let ctx = FunctorContext::new(builtin_exotic_15_1(), PrimeField::new(2).unwrap()).unwrap();
    check_dims(&ctx, 3);
    assert_eq!(ctx.dim(1), 13);

    for ground in 3..=5usize {
        let ctx = FunctorContext::new(degenerate(ground).unwrap(), Rationals).unwrap();
        check_dims(&ctx, 1);
        for a in 1..ground {
            let subsets = (0u32..1 << ground).filter(|m| m.count_ones() as usize == a).count();
            assert_eq!(ctx.dim(a), subsets);
        }
    }
}

#[test]
fn exotic_lines_reconstruct() {
    let tp: TrianglePresentation = builtin_exotic_15_1();
    let l3 = tp.id_of("l3").unwrap();
    let mut pts: Vec<&str> = tp.geometry().incident_of_dim(l3, 1).into_iter().map(|p| tp.name(p)).collect();
    pts.sort_by_key(|s| s[1..].parse::<u32>().unwrap());
    assert_eq!(pts, ["p3", "p4", "p7", "p9"]);
    assert!(verify_plane_axioms(tp.geometry(), false).unwrap().all_pass());
}
