//! Independent re-checks of normal-form outputs: every identity is recomputed
//! here from the returned matrices with exact complex-rational arithmetic.
#![allow(dead_code)]

use pencil_core::linalg::Matrix;
use pencil_core::normal_forms::{
    CMat, ComputationPath, DiagonalizationResult, NodalCanonResult, NodalFormResult,
};
use pencil_core::numeric::{pow2, CRat};
use pencil_core::pencil::tangency_pencil;
use pencil_core::{Pencil, Rat};

pub type CM = Vec<Vec<CRat>>;

pub fn from_cmat(m: &CMat) -> CM {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j).clone()).collect())
        .collect()
}

pub fn from_rat(m: &Matrix<Rat>) -> CM {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(CRat::real).collect())
        .collect()
}

pub fn mul(a: &CM, b: &CM) -> CM {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(CRat::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &CM) -> CM {
    (0..a[0].len())
        .map(|j| (0..a.len()).map(|i| a[i][j].clone()).collect())
        .collect()
}

pub fn lin(x: &CRat, a: &CM, y: &CRat, b: &CM) -> CM {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(p, q)| &(x * p) + &(y * q)).collect())
        .collect()
}

/// Largest squared entry modulus of `a − b`.
pub fn max_err_sq(a: &CM, b: &CM) -> Rat {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(p, q)| (p - q).norm_sq())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// `a = b` exactly on the exact path, else every entry within `2^-bits`.
pub fn agrees(a: &CM, b: &CM, path: ComputationPath, bits: i64) -> bool {
    let e = max_err_sq(a, b);
    match path {
        ComputationPath::Exact => e.is_zero(),
        ComputationPath::CertifiedNumeric => e < pow2(-2 * bits),
    }
}

fn diag(d: &[CRat]) -> CM {
    (0..d.len())
        .map(|i| (0..d.len()).map(|j| if i == j { d[i].clone() } else { CRat::zero() }).collect())
        .collect()
}

fn members(p: &Pencil) -> (CM, CM) {
    (from_rat(p.q0().matrix()), from_rat(p.q1().matrix()))
}

/// `Tᵀ·B₀·T = I` and `Tᵀ·B₁·T = diag(λ)` for the basis-changed input.
pub fn diagonalization_holds(p: &Pencil, r: &DiagonalizationResult, bits: i64) -> bool {
    let Ok(pb) = p.change_basis(&r.basis) else {
        return false;
    };
    let (b0, b1) = members(&pb);
    let t = from_cmat(&r.transform.to_crat());
    let tt = transpose(&t);
    let lambdas: Vec<CRat> = r.lambdas.iter().map(|l| l.to_crat()).collect();
    let one = vec![CRat::one(); 4];
    agrees(&mul(&mul(&tt, &b0), &t), &diag(&one), r.path, bits)
        && agrees(&mul(&mul(&tt, &b1), &t), &diag(&lambdas), r.path, bits)
}

fn w_members(a: &CRat, b: &CRat) -> (CM, CM) {
    // W_{a,b} is linear in (a, b): W(0,0) + a·E11 + b·E22
    let (w0, w00) = members(&tangency_pencil(&Rat::zero(), &Rat::zero()));
    let mut w1 = w00;
    w1[1][1] = &w1[1][1] + a;
    w1[2][2] = &w1[2][2] + b;
    (w0, w1)
}

/// `g·Q'ᵢ·gᵀ = W_{a,b}` where `Q'` is the input in basis `m`.
pub fn nodal_form_holds(p: &Pencil, r: &NodalFormResult, bits: i64) -> bool {
    let Ok(pb) = p.change_basis(&r.m) else {
        return false;
    };
    let (b0, b1) = members(&pb);
    let g = from_cmat(&r.g.to_crat());
    let gt = transpose(&g);
    let (w0, w1) = w_members(&r.a.to_crat(), &r.b.to_crat());
    agrees(&mul(&mul(&g, &b0), &gt), &w0, r.path, bits)
        && agrees(&mul(&mul(&g, &b1), &gt), &w1, r.path, bits)
}

/// `g·Q'ᵢ·gᵀ = W_node` where `Q'ᵢ = mᵢ₀·Q0 + mᵢ₁·Q1` and `m` may be complex.
pub fn canonical_form_holds(p: &Pencil, r: &NodalCanonResult, bits: i64) -> bool {
    let (q0, q1) = members(p);
    let m = from_cmat(&r.m.to_crat());
    let b0 = lin(&m[0][0], &q0, &m[0][1], &q1);
    let b1 = lin(&m[1][0], &q0, &m[1][1], &q1);
    let g = from_cmat(&r.g.to_crat());
    let gt = transpose(&g);
    let (w0, w1) = w_members(&CRat::one(), &CRat::real(Rat::from_int(2)));
    agrees(&mul(&mul(&g, &b0), &gt), &w0, r.path, bits)
        && agrees(&mul(&mul(&g, &b1), &gt), &w1, r.path, bits)
}
