//! Seeded random objects for property batches and experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Matrix;
use crate::pencil::{tangency_pencil, Mat2, Pencil, SymMat4};
use crate::quartic::BinaryQuartic;
use crate::rat::Rat;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int(rng: &mut ChaCha8Rng, height: i64) -> Rat {
    Rat::from_int(rng.gen_range(-height..=height))
}

fn nonzero_int(rng: &mut ChaCha8Rng, height: i64) -> Rat {
    loop {
        let v = rng.gen_range(-height..=height);
        if v != 0 {
            return Rat::from_int(v);
        }
    }
}

pub fn symmetric(rng: &mut ChaCha8Rng, height: i64) -> SymMat4 {
    let mut m = Matrix::<Rat>::zeros(4, 4);
    for i in 0..4 {
        for j in i..4 {
            let v = int(rng, height);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    SymMat4::new(m).expect("symmetric by construction")
}

pub fn invertible(rng: &mut ChaCha8Rng, height: i64) -> Matrix<Rat> {
    loop {
        let rows = (0..4).map(|_| (0..4).map(|_| int(rng, height)).collect()).collect();
        let g = Matrix::from_rows(rows);
        if !g.det().is_zero() {
            return g;
        }
    }
}

pub fn gl2(rng: &mut ChaCha8Rng, height: i64) -> Mat2 {
    loop {
        let m: Mat2 = std::array::from_fn(|_| std::array::from_fn(|_| int(rng, height)));
        if !crate::pencil::mat2_det(&m).is_zero() {
            return m;
        }
    }
}

pub fn quartic(rng: &mut ChaCha8Rng, height: i64) -> BinaryQuartic {
    BinaryQuartic::new(std::array::from_fn(|_| int(rng, height)))
}

pub fn squarefree_quartic(rng: &mut ChaCha8Rng, height: i64) -> BinaryQuartic {
    loop {
        let f = quartic(rng, height);
        if !f.is_zero() && f.root_type().is_squarefree() {
            return f;
        }
    }
}

/// A random pencil whose discriminant is squarefree.
pub fn smooth_pencil(rng: &mut ChaCha8Rng, height: i64) -> Pencil {
    loop {
        if let Ok(p) = Pencil::new(symmetric(rng, height), symmetric(rng, height)) {
            let f = p.discriminant_quartic();
            if !f.is_zero() && f.root_type().is_squarefree() {
                return p;
            }
        }
    }
}

/// Distinct nonzero rationals `a ≠ b`.
pub fn tangency_parameters(rng: &mut ChaCha8Rng, height: i64) -> (Rat, Rat) {
    loop {
        let a = nonzero_int(rng, height) / nonzero_int(rng, height).abs();
        let b = nonzero_int(rng, height) / nonzero_int(rng, height).abs();
        if a != b {
            return (a, b);
        }
    }
}

/// A random point of the nodal stratum: a congruence image of `W_{a,b}`.
pub fn nodal_pencil(rng: &mut ChaCha8Rng, height: i64) -> Pencil {
    let (a, b) = tangency_parameters(rng, height);
    let g = invertible(rng, height);
    tangency_pencil(&a, &b).congruence_act(&g).expect("invertible")
}

/// Pencils drawn from several strata: smooth, nodal, `2+2`, and a line in D.
pub fn mixed_pencil(rng: &mut ChaCha8Rng, height: i64) -> Pencil {
    let g = invertible(rng, height);
    let base = match rng.gen_range(0..6) {
        0..=2 => return smooth_pencil(rng, height),
        3 | 4 => nodal_pencil(rng, height),
        _ => {
            if rng.gen_bool(0.5) {
                Pencil::new(
                    SymMat4::diagonal([Rat::one(), Rat::one(), Rat::zero(), Rat::zero()]),
                    SymMat4::diagonal([Rat::zero(), Rat::zero(), Rat::one(), Rat::one()]),
                )
                .expect("independent")
            } else {
                Pencil::new(
                    SymMat4::from_monomials(&[(0, 1, Rat::one())]),
                    SymMat4::from_monomials(&[(0, 2, Rat::one())]),
                )
                .expect("independent")
            }
        }
    };
    base.congruence_act(&g).expect("invertible")
}
