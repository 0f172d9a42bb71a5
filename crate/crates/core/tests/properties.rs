mod common;

use pencil_core::moduli::{cross_ratio_lambda, legendre_j, RootValue};
use pencil_core::normal_forms::{
    diagonal_pencil, nodal_canonicalize, nodal_normalize, simultaneous_diagonalize, Eigenvalue,
};
use pencil_core::numeric::pow2;
use pencil_core::pencil::Mat2;
use pencil_core::roots::eval_c;
use pencil_core::sampling;
use pencil_core::schubert::{degree, pieri_sigma1, plucker_degree, Partition2};
use pencil_core::slice::{random_slice, slice_campaign, slice_campaign_sequential, SliceCharts};
use pencil_core::{
    classify, complex_roots, BinaryQuartic, OrbitTag, Pencil, ProjValue, Rat, UniPoly,
};
use proptest::prelude::*;

fn quartic(c: [i64; 5]) -> BinaryQuartic {
    BinaryQuartic::from_ints(c)
}

fn mat2(m: [i64; 4]) -> Mat2 {
    [
        [Rat::from_int(m[0]), Rat::from_int(m[1])],
        [Rat::from_int(m[2]), Rat::from_int(m[3])],
    ]
}

fn det2(m: [i64; 4]) -> i64 {
    m[0] * m[3] - m[1] * m[2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn covariance_weights(c in prop::array::uniform5(-20i64..=20), m in prop::array::uniform4(-6i64..=6)) {
        prop_assume!(det2(m) != 0);
        let f = quartic(c);
        let g = f.gl2_substitute(&mat2(m)).unwrap();
        let d = Rat::from_int(det2(m));
        let (a, b) = (f.invariants(), g.invariants());
        prop_assert_eq!(b.i, a.i * d.pow(4));
        prop_assert_eq!(b.j, a.j * d.pow(6));
        prop_assert_eq!(b.delta, a.delta * d.pow(12));
    }

    #[test]
    fn singular_substitution_rejected(c in prop::array::uniform5(-20i64..=20), k in -5i64..=5, x in -5i64..=5, y in -5i64..=5) {
        let m = [x, y, k * x, k * y];
        prop_assert!(quartic(c).gl2_substitute(&mat2(m)).is_err());
    }

    #[test]
    fn discriminant_vanishes_iff_repeated_root(c in prop::array::uniform5(-12i64..=12)) {
        let f = quartic(c);
        prop_assume!(!f.is_zero());
        let inv = f.invariants();
        prop_assert_eq!(&inv.delta, &(inv.i.pow(3) - Rat::from_int(27) * &inv.j * &inv.j));
        prop_assert_eq!(inv.delta.is_zero(), !f.root_type().is_squarefree());
    }

    #[test]
    fn root_type_sums_to_four(c in prop::array::uniform5(-12i64..=12)) {
        let f = quartic(c);
        prop_assume!(!f.is_zero());
        prop_assert_eq!(f.root_type().parts().iter().sum::<usize>(), 4);
    }

    #[test]
    fn cross_ratio_j_matches_invariant_j(r in prop::array::uniform4(-30i64..=30)) {
        let mut sorted = r;
        sorted.sort();
        prop_assume!(sorted.windows(2).all(|w| w[0] != w[1]));
        let roots = r.map(Rat::from_int);
        let f = BinaryQuartic::from_roots(&roots);
        let lambda = cross_ratio_lambda(&roots.clone().map(RootValue::Exact)).unwrap();
        let lambda = match lambda {
            pencil_core::moduli::LambdaValue::Exact(l) => l,
            other => panic!("rational roots gave {other:?}"),
        };
        prop_assert_eq!(legendre_j(&lambda), f.j_invariant().unwrap());
    }

    #[test]
    fn legendre_j_is_s3_invariant(n in -50i64..=50, d in 1i64..=50) {
        let l = Rat::new(n, d);
        prop_assume!(!l.is_zero() && !l.is_one());
        let j = legendre_j(&l);
        prop_assert_eq!(&legendre_j(&(Rat::one() - &l)), &j);
        prop_assert_eq!(&legendre_j(&l.recip().unwrap()), &j);
        prop_assert_eq!(&legendre_j(&(&l / &(&l - &Rat::one()))), &j);
    }

    #[test]
    fn certified_roots_are_separated_and_small(c in prop::collection::vec(-9i64..=9, 2..8)) {
        let p = UniPoly::from_ints(&c).squarefree_part();
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let roots = complex_roots(&p, 256).unwrap();
        prop_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), p.deg0());
        for (i, a) in roots.iter().enumerate() {
            for b in &roots[i + 1..] {
                prop_assert!(!a.overlaps(b));
            }
            prop_assert!(a.error_radius < pow2(-100));
        }
    }

    #[test]
    fn rational_roots_are_roots(c in prop::collection::vec(-30i64..=30, 1..7)) {
        let p = UniPoly::from_ints(&c);
        prop_assume!(!p.is_zero());
        for r in p.rational_roots() {
            prop_assert!(p.eval(&r).is_zero());
        }
    }

    #[test]
    fn rat_text_round_trip(n in -1_000_000i64..=1_000_000, d in 1i64..=1_000_000) {
        let r = Rat::new(n, d);
        prop_assert_eq!(r.to_fraction_string().parse::<Rat>().unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn discriminant_covariance(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let p = Pencil::new(sampling::symmetric(&mut rng, 5), sampling::symmetric(&mut rng, 5));
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let g = sampling::invertible(&mut rng, 3);
        let m = sampling::gl2(&mut rng, 4);
        let f = p.discriminant_quartic();
        let moved = p.congruence_act(&g).unwrap().discriminant_quartic();
        prop_assert_eq!(moved, f.scale(&g.det().pow(2)));
        let rebased = p.change_basis(&m).unwrap().discriminant_quartic();
        prop_assert_eq!(rebased, f.gl2_substitute(&m).unwrap());
    }

    #[test]
    fn classification_is_invariant(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let p = sampling::mixed_pencil(&mut rng, 3);
        let g = sampling::invertible(&mut rng, 3);
        let m = sampling::gl2(&mut rng, 3);
        let c = classify(&p).unwrap().signature();
        let moved = p.congruence_act(&g).unwrap().change_basis(&m).unwrap();
        prop_assert_eq!(classify(&moved).unwrap().signature(), c);
    }

    #[test]
    fn stabilizer_is_invariant(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let p = sampling::mixed_pencil(&mut rng, 3);
        let g = sampling::invertible(&mut rng, 3);
        let m = sampling::gl2(&mut rng, 3);
        let moved = p.congruence_act(&g).unwrap().change_basis(&m).unwrap();
        prop_assert_eq!(
            p.infinitesimal_stabilizer_dim(),
            moved.infinitesimal_stabilizer_dim()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagonal_pencils_round_trip(l in prop::array::uniform4(-9i64..=9), seed in any::<u64>()) {
        let mut sorted = l;
        sorted.sort();
        prop_assume!(sorted.windows(2).all(|w| w[0] != w[1]));
        let lambdas = l.map(Rat::from_int);
        let g = sampling::invertible(&mut sampling::rng(seed), 3);
        let p = diagonal_pencil(&lambdas).unwrap().congruence_act(&g).unwrap();
        let r = simultaneous_diagonalize(&p).unwrap();
        prop_assert!(common::diagonalization_holds(&p, &r, 128));
        // the input basis is already non-degenerate, so the eigenvalues are
        // the diagonal entries themselves
        let mut got: Vec<Rat> = r
            .lambdas
            .iter()
            .map(|e| match e {
                Eigenvalue::Exact(x) => x.clone(),
                Eigenvalue::Certified(c) => panic!("rational spectrum certified numerically: {c:?}"),
            })
            .collect();
        got.sort();
        prop_assert_eq!(got, sorted.map(Rat::from_int).to_vec());
    }

    #[test]
    fn eigenvalues_are_discriminant_roots(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let p = sampling::smooth_pencil(&mut rng, 4);
        let r = simultaneous_diagonalize(&p).unwrap();
        prop_assert!(common::diagonalization_holds(&p, &r, 128));
        // det(B1 − λ·B0) = f'(−λ, 1) for the basis-changed form f'
        let f = p.change_basis(&r.basis).unwrap().discriminant_quartic().dehomogenize();
        let scale = f.coeffs().iter().map(|c| c.abs()).max().unwrap();
        for l in &r.lambdas {
            let v = eval_c(&f, &-l.to_crat());
            prop_assert!(v.norm_sq() < &scale * &scale * pow2(-200));
        }
    }

    #[test]
    fn nodal_pencils_normalize(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let p = sampling::nodal_pencil(&mut rng, 3);
        prop_assert_eq!(classify(&p).unwrap().tag, OrbitTag::NodalStratum);
        let nf = nodal_normalize(&p).unwrap();
        prop_assert!(common::nodal_form_holds(&p, &nf, 128));
        let canon = nodal_canonicalize(&p).unwrap();
        prop_assert!(common::canonical_form_holds(&p, &canon, 128));
    }
}

#[test]
fn iterated_pieri_pairs_to_one() {
    for n in 4..=10 {
        let curve = Partition2::new(n - 2, n - 3, n).unwrap();
        assert_eq!(degree(&pieri_sigma1(&curve)), Ok(1), "n = {n}");
        // standard tableaux of a 2 × (n−2) rectangle: C(2k, k)/(k+1)
        let k = (n - 2) as i64;
        let catalan = (1..=k).fold(1i64, |acc, i| acc * (k + i) / i) / (k + 1);
        assert_eq!(plucker_degree(n).unwrap(), catalan, "n = {n}");
    }
}

#[test]
fn campaign_is_deterministic_and_order_independent() {
    let values = [Rat::from_int(5)];
    let a = slice_campaign(4, 11, 10, &values).unwrap();
    let b = slice_campaign(4, 11, 10, &values).unwrap();
    let c = slice_campaign_sequential(4, 11, 10, &values).unwrap();
    let json = |r| serde_json::to_string(r).unwrap();
    assert_eq!(json(&a), json(&b));
    assert_eq!(json(&a), json(&c));
}

#[test]
fn charts_agree_and_degrees_are_bounded() {
    for seed in 0..12 {
        let ch = SliceCharts::new(&random_slice(seed, 10).unwrap());
        assert!(ch.consistent(), "seed {seed}");
        assert_eq!(ch.i_u.degree(), Some(4), "seed {seed}");
        assert_eq!(ch.j_u.degree(), Some(6), "seed {seed}");
        assert_eq!(ch.delta_u().degree(), Some(12), "seed {seed}");
    }
}

#[test]
fn tangency_matches_classification_on_rational_lines() {
    for seed in 20..24 {
        let sl = random_slice(seed, 10).unwrap();
        let (p0, p1) = sl.complement();
        let delta = pencil_core::tangent_polynomial(&sl);
        for u in -4..=4 {
            let u = Rat::from_int(u);
            let dir: [Rat; 3] = std::array::from_fn(|i| &p0[i] + &(&u * &p1[i]));
            let line = Pencil::new(
                pencil_core::SymMat4::new(sl.point(&sl.q_coeffs)).unwrap(),
                pencil_core::SymMat4::new(sl.point(&dir)).unwrap(),
            )
            .unwrap();
            let smooth = classify(&line).unwrap().tag == OrbitTag::SmoothFiber;
            assert_eq!(delta.eval(&u).is_zero(), !smooth, "seed {seed}, u = {u}");
        }
    }
}

#[test]
fn pencil_json_round_trip() {
    let mut rng = sampling::rng(3);
    for _ in 0..20 {
        let p = sampling::mixed_pencil(&mut rng, 4);
        let text = serde_json::to_string(&p).unwrap();
        let back: Pencil = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn j_values_of_special_fibers() {
    let j = |l: Rat| legendre_j(&l);
    assert_eq!(j(Rat::from_int(-1)), ProjValue::Finite(Rat::from_int(1728)));
    assert_eq!(j(Rat::from_int(0)), ProjValue::Infinity);
}
