//! Normal forms: simultaneous diagonalization of smooth pencils, the
//! tangency normal form `W_{a,b}` on the nodal stratum, canonicalization to
//! `W_node`, and verification of the node of the base curve.
//!
//! Each pipeline runs over ℚ first. When a square root it needs is not
//! rational, the same pipeline reruns on rounded complex values and the
//! result is accepted only if the residual of the claimed identity is below
//! `2^(-precision/2)`, measured exactly on the rounded values.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, bilinear, split_eliminate, Field, Matrix};
use crate::numeric::{pow2, rat_to_decimal, sqrt_rat_upper, Approx, CRat};
use crate::pencil::{normalize_point, Mat2, Pencil, SymMat4};
use crate::poly::UniPoly;
use crate::rat::Rat;
use crate::roots::{complex_roots, eval_c, CRoot, DEFAULT_PRECISION, MAX_PRECISION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComputationPath {
    Exact,
    CertifiedNumeric,
}

/// A scalar from either path. Serializes as `"num/den"` or a decimal string.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldValue {
    Exact(Rat),
    Numeric(Approx),
}

impl FieldValue {
    pub fn exact(&self) -> Option<&Rat> {
        match self {
            FieldValue::Exact(r) => Some(r),
            FieldValue::Numeric(_) => None,
        }
    }

    pub fn to_crat(&self) -> CRat {
        match self {
            FieldValue::Exact(r) => CRat::real(r.clone()),
            FieldValue::Numeric(a) => a.z.clone(),
        }
    }
}

impl Serialize for FieldValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FieldValue::Exact(r) => r.serialize(s),
            FieldValue::Numeric(a) => a.serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldMatrix {
    Exact(Matrix<Rat>),
    Numeric(Matrix<Approx>),
}

impl FieldMatrix {
    pub fn exact(&self) -> Option<&Matrix<Rat>> {
        match self {
            FieldMatrix::Exact(m) => Some(m),
            FieldMatrix::Numeric(_) => None,
        }
    }

    pub fn to_crat(&self) -> CMat {
        match self {
            FieldMatrix::Exact(m) => CMat::from_rat(m),
            FieldMatrix::Numeric(m) => CMat::from_approx(m),
        }
    }
}

impl Serialize for FieldMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FieldMatrix::Exact(m) => m.to_rows().serialize(s),
            FieldMatrix::Numeric(m) => m.to_rows().serialize(s),
        }
    }
}

fn ser_residual<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_to_decimal(r, 6))
}

/// Dense complex-rational matrix used to measure residuals exactly.
#[derive(Clone, Debug)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<CRat>,
}

impl CMat {
    fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> CRat) -> CMat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_rat(m: &Matrix<Rat>) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, j| CRat::real(m.get(i, j).clone()))
    }

    pub fn from_approx(m: &Matrix<Approx>) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, j| m.get(i, j).z.clone())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CRat {
        &self.data[i * self.cols + j]
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        CMat::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(CRat::zero(), |acc, k| &acc + &(self.get(i, k) * o.get(k, j)))
        })
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Upper bound on the largest entry modulus of `self − other`.
    pub fn max_diff(&self, other: &CMat) -> Rat {
        let worst = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sq())
            .max()
            .unwrap_or_else(Rat::zero);
        sqrt_rat_upper(&worst, 64)
    }
}

fn residual_ok(residual: &Rat, bits: u32) -> bool {
    *residual < pow2(-(bits as i64) / 2)
}

/// `⟨Σ xᵢ², Σ λᵢ xᵢ²⟩`
pub fn diagonal_pencil(lambdas: &[Rat; 4]) -> Result<Pencil> {
    for i in 0..4 {
        for j in i + 1..4 {
            if lambdas[i] == lambdas[j] {
                return Err(Error::RepeatedLambda);
            }
        }
    }
    Pencil::new(
        SymMat4::diagonal([Rat::one(), Rat::one(), Rat::one(), Rat::one()]),
        SymMat4::diagonal(lambdas.clone()),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalue {
    Exact(Rat),
    Certified(CRoot),
}

impl Eigenvalue {
    pub fn to_crat(&self) -> CRat {
        match self {
            Eigenvalue::Exact(r) => CRat::real(r.clone()),
            Eigenvalue::Certified(c) => c.approximation.clone(),
        }
    }
}

impl Serialize for Eigenvalue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Eigenvalue::Exact(r) => r.serialize(s),
            Eigenvalue::Certified(c) => c.serialize(s),
        }
    }
}

/// `transformᵀ·B₀·transform = I` and `transformᵀ·B₁·transform = diag(lambdas)`
/// where `(B₀, B₁)` is the input basis changed by `basis` (the identity
/// unless `Q0` was singular).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalizationResult {
    pub lambdas: Vec<Eigenvalue>,
    pub transform: FieldMatrix,
    pub basis: Mat2,
    pub path: ComputationPath,
    #[serde(serialize_with = "ser_residual")]
    pub residual: Rat,
    pub precision_bits: u32,
}

/// Parameters `k = 0, 1, −1, 2, −2, …`
fn small_parameters() -> impl Iterator<Item = i64> {
    (0i64..).map(|n| if n % 2 == 1 { (n + 1) / 2 } else { -(n / 2) })
}

pub fn simultaneous_diagonalize(p: &Pencil) -> Result<DiagonalizationResult> {
    simultaneous_diagonalize_with(p, DEFAULT_PRECISION)
}

pub fn simultaneous_diagonalize_with(p: &Pencil, precision_bits: u32) -> Result<DiagonalizationResult> {
    if precision_bits < 64 {
        return Err(Error::PrecisionTooLow(precision_bits));
    }
    let f = p.discriminant_quartic();
    if f.is_zero() || !f.root_type().is_squarefree() {
        return Err(Error::NotSmooth);
    }
    let (k, b0) = small_parameters()
        .map(|k| (k, p.member(&Rat::one(), &Rat::from_int(k))))
        .find(|(_, m)| !m.det().is_zero())
        .expect("a nonzero discriminant has a non-root among small parameters");
    let basis: Mat2 = [[Rat::one(), Rat::from_int(k)], [Rat::zero(), Rat::one()]];
    let b0 = b0.matrix().clone();
    let b1 = p.q1().matrix().clone();
    let t = linalg::inverse(&b0).expect("nonzero determinant").mul(&b1);

    if let Some(res) = diagonalize_exact(&b0, &t, &basis) {
        return Ok(res);
    }
    let mut bits = precision_bits;
    loop {
        let res = diagonalize_numeric(&b0, &b1, &t, &basis, bits)?;
        if residual_ok(&res.residual, bits) {
            return Ok(res);
        }
        if bits >= MAX_PRECISION {
            return Err(Error::CertificationFailed { bits });
        }
        bits = (bits * 2).min(MAX_PRECISION);
    }
}

fn char_poly(t: &Matrix<Rat>) -> UniPoly {
    let m = Matrix::from_fn(4, 4, |i, j| {
        let c = UniPoly::constant(-t.get(i, j).clone());
        if i == j {
            c + UniPoly::x()
        } else {
            c
        }
    });
    m.det()
}

fn diagonalize_exact(b0: &Matrix<Rat>, t: &Matrix<Rat>, basis: &Mat2) -> Option<DiagonalizationResult> {
    let mut lambdas = char_poly(t).rational_roots();
    if lambdas.len() != 4 {
        return None;
    }
    lambdas.sort();
    let mut columns = Vec::with_capacity(4);
    for l in &lambdas {
        let shifted = t.sub(&Matrix::identity(4).scale(l));
        let v = linalg::kernel(&shifted).remove(0);
        let n = bilinear(b0, &v, &v);
        let s = n.sqrt_exact()?;
        columns.push(v.into_iter().map(|x| x / &s).collect::<Vec<_>>());
    }
    let transform = Matrix::from_fn(4, 4, |i, j| columns[j][i].clone());
    Some(DiagonalizationResult {
        lambdas: lambdas.into_iter().map(Eigenvalue::Exact).collect(),
        transform: FieldMatrix::Exact(transform),
        basis: basis.clone(),
        path: ComputationPath::Exact,
        residual: Rat::zero(),
        precision_bits: 0,
    })
}

fn diagonalize_numeric(
    b0: &Matrix<Rat>,
    b1: &Matrix<Rat>,
    t: &Matrix<Rat>,
    basis: &Mat2,
    bits: u32,
) -> Result<DiagonalizationResult> {
    let chi = char_poly(t);
    let shifted = Matrix::from_fn(4, 4, |i, j| {
        let c = UniPoly::constant(t.get(i, j).clone());
        if i == j {
            c - UniPoly::x()
        } else {
            c
        }
    });
    let mut found: Vec<(CRoot, Vec<CRat>)> = Vec::new();
    for piece in split_eliminate(&shifted, &chi) {
        debug_assert_eq!(piece.rank, 3);
        let kernel = &piece.kernel[0];
        for root in complex_roots(&piece.modulus, bits)? {
            let z = &root.approximation;
            let v: Vec<CRat> = kernel.iter().map(|k| eval_c(k, z)).collect();
            let mut n = CRat::zero();
            for i in 0..4 {
                for j in 0..4 {
                    n = &n + &(&(&v[i] * &v[j]) * &CRat::real(b0.get(i, j).clone()));
                }
            }
            let s = n.sqrt_approx(bits + 32);
            let col = v.iter().map(|x| (x / &s).round(bits + 32)).collect();
            found.push((root, col));
        }
    }
    found.sort_by(|a, b| a.0.cmp_position(&b.0));
    let transform = Matrix::from_fn(4, 4, |i, j| Approx::new(found[j].1[i].clone(), bits));
    let lambdas: Vec<Eigenvalue> = found
        .into_iter()
        .map(|(r, _)| match r.exact.clone() {
            Some(x) => Eigenvalue::Exact(x),
            None => Eigenvalue::Certified(r),
        })
        .collect();
    let tc = CMat::from_approx(&transform);
    let r0 = tc.transpose().mul(&CMat::from_rat(b0)).mul(&tc);
    let r1 = tc.transpose().mul(&CMat::from_rat(b1)).mul(&tc);
    let id = CMat::from_rat(&Matrix::identity(4));
    let diag = CMat::from_fn(4, 4, |i, j| {
        if i == j {
            lambdas[i].to_crat()
        } else {
            CRat::zero()
        }
    });
    let residual = std::cmp::max(r0.max_diff(&id), r1.max_diff(&diag));
    Ok(DiagonalizationResult {
        lambdas,
        transform: FieldMatrix::Numeric(transform),
        basis: basis.clone(),
        path: ComputationPath::CertifiedNumeric,
        residual,
        precision_bits: bits,
    })
}

/// Symmetric Lagrange reduction over ℚ: rows `w` of the returned matrix
/// satisfy `M(wᵢ, wⱼ) = 0` for `i ≠ j`; radical vectors come last.
pub fn lagrange_diagonalize(m: &Matrix<Rat>) -> (Matrix<Rat>, Vec<Rat>) {
    let n = m.nrows();
    let mut pending: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    while !pending.is_empty() {
        let pivot = match pending.iter().position(|v| !bilinear(m, v, v).is_zero()) {
            Some(i) => pending.remove(i),
            None => {
                let pair = (0..pending.len())
                    .flat_map(|i| (i + 1..pending.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !bilinear(m, &pending[i], &pending[j]).is_zero());
                match pair {
                    Some((i, j)) => {
                        let w: Vec<Rat> = pending[i].iter().zip(&pending[j]).map(|(a, b)| a + b).collect();
                        pending.remove(i);
                        w
                    }
                    None => break,
                }
            }
        };
        let d = bilinear(m, &pivot, &pivot);
        for w in pending.iter_mut() {
            let c = bilinear(m, w, &pivot) / &d;
            for (x, p) in w.iter_mut().zip(&pivot) {
                *x -= &c * p;
            }
        }
        rows.push(pivot);
        diag.push(d);
    }
    for w in pending {
        rows.push(w);
        diag.push(Rat::zero());
    }
    (Matrix::from_rows(rows), diag)
}

/// `W_{a,b} = ⟨x₀²+x₁²+x₂², x₀x₃ + a·x₁² + b·x₂²⟩` over any field.
fn tangency_target<F: Field>(a: &F, b: &F, bits: u32) -> (Matrix<F>, Matrix<F>) {
    let one = F::lift(&Rat::one(), bits);
    let half = F::lift(&Rat::new(1, 2), bits);
    let mut m0 = Matrix::<F>::zeros(4, 4);
    for i in 0..3 {
        m0.set(i, i, one.clone());
    }
    let mut m1 = Matrix::<F>::zeros(4, 4);
    m1.set(0, 3, half.clone());
    m1.set(3, 0, half);
    m1.set(1, 1, a.clone());
    m1.set(2, 2, b.clone());
    (m0, m1)
}

/// The rational double root `(s₀:t₀)` of a nodal pencil's discriminant.
pub fn nodal_double_root(p: &Pencil) -> Result<(Rat, Rat)> {
    let f = p.discriminant_quartic();
    if f.is_zero() || !f.root_type().is(&[2, 1, 1]) {
        return Err(Error::NotNodal);
    }
    let (s, t) = if f.infinity_multiplicity() == 2 {
        (Rat::one(), Rat::zero())
    } else {
        let (factor, _) = f
            .dehomogenize()
            .squarefree_decomposition()
            .into_iter()
            .find(|(_, k)| *k == 2)
            .expect("2+1+1 has a double factor");
        (-(factor.coeff(0) / factor.coeff(1)), Rat::one())
    };
    if p.member(&s, &t).rank() != 3 {
        return Err(Error::NotNodal);
    }
    Ok((s, t))
}

/// Basis change putting the double-root member first.
fn nodal_basis(s0: &Rat, t0: &Rat) -> Mat2 {
    if t0.is_zero() {
        [[s0.clone(), Rat::zero()], [Rat::zero(), Rat::one()]]
    } else {
        [[s0.clone(), t0.clone()], [Rat::one(), Rat::zero()]]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodalFormResult {
    pub a: FieldValue,
    pub b: FieldValue,
    /// `congruence_act(g, P.change_basis(m)) = W_{a,b}`
    pub g: FieldMatrix,
    pub m: Mat2,
    pub path: ComputationPath,
    #[serde(serialize_with = "ser_residual")]
    pub residual: Rat,
    pub precision_bits: u32,
}

struct NodalCore<F> {
    g: Matrix<F>,
    a: F,
    b: F,
}

fn embed3<F: Field>(block: &[[F; 3]; 3], corner: F) -> Matrix<F> {
    Matrix::from_fn(4, 4, |i, j| match (i < 3, j < 3) {
        (true, true) => block[i][j].clone(),
        (false, false) => corner.clone(),
        _ => F::zero(),
    })
}

/// Normalization of `(M, N)` already congruent to `(diag(d₀,d₁,d₂,0), N₁)`
/// by the rational `g1`. `None` when a needed square root does not exist in
/// `F`.
fn nodal_core<F: Field>(g1: &Matrix<Rat>, d: &[Rat], n1: &Matrix<Rat>, bits: u32) -> Option<NodalCore<F>> {
    let lift = |r: &Rat| F::lift(r, bits);
    let one = F::one();
    let mut g = g1.map(lift);
    let mut n = n1.map(lift);

    // unit diagonal on x0, x1, x2
    let mut scale = Matrix::<F>::identity(4);
    for i in 0..3 {
        let root = lift(&d[i]).try_sqrt()?;
        scale.set(i, i, one.clone() / root);
    }
    g = scale.mul(&g);
    n = n.congruence(&scale);

    // orthogonal map sending L = (N03, N13, N23) to a multiple of e0
    let bvec = [n.get(3, 0).clone(), n.get(3, 1).clone(), n.get(3, 2).clone()];
    let nu = if bvec[1].is_exact_zero() && bvec[2].is_exact_zero() {
        bvec[0].clone()
    } else {
        let bb = bvec.iter().fold(F::zero(), |acc, x| acc + x.clone() * x.clone());
        let nu = bb.try_sqrt()?;
        let neg = -nu.clone();
        let nu = if (nu.clone() - bvec[0].clone()).magnitude() >= (neg.clone() - bvec[0].clone()).magnitude() {
            nu
        } else {
            neg
        };
        let w = [bvec[0].clone() - nu.clone(), bvec[1].clone(), bvec[2].clone()];
        let ww = w.iter().fold(F::zero(), |acc, x| acc + x.clone() * x.clone());
        let two = lift(&Rat::from_int(2));
        let h: [[F; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let delta = if i == j { one.clone() } else { F::zero() };
                delta - two.clone() * w[i].clone() * w[j].clone() / ww.clone()
            })
        });
        let h = embed3(&h, one.clone());
        g = h.mul(&g);
        n = n.congruence(&h);
        nu
    };
    if nu.is_exact_zero() {
        return None;
    }

    // x0 x3 coefficient 1
    let mut k = Matrix::<F>::identity(4);
    k.set(3, 3, one.clone() / (lift(&Rat::from_int(2)) * nu));
    g = k.mul(&g);
    n = n.congruence(&k);

    // shear x3 -> x3 + l(x0, x1, x2) removing x0^2, x0x1, x0x2
    let two = lift(&Rat::from_int(2));
    let mut sh = Matrix::<F>::identity(4);
    sh.set(0, 3, -n.get(0, 0).clone());
    sh.set(1, 3, -(two.clone() * n.get(0, 1).clone()));
    sh.set(2, 3, -(two.clone() * n.get(0, 2).clone()));
    g = sh.mul(&g);
    n = n.congruence(&sh);

    // orthogonal diagonalization of the (x1, x2) block
    let (a11, a12, a22) = (n.get(1, 1).clone(), n.get(1, 2).clone(), n.get(2, 2).clone());
    if a12.is_exact_zero() {
        return Some(NodalCore { g, a: a11, b: a22 });
    }
    let tr = a11.clone() + a22.clone();
    let diff = a11.clone() - a22.clone();
    let disc = diff.clone() * diff + lift(&Rat::from_int(4)) * a12.clone() * a12.clone();
    let sq = disc.try_sqrt()?;
    let a = (tr.clone() - sq.clone()) / two.clone();
    let b = (tr + sq) / two;
    let unit = |lambda: &F| -> Option<[F; 2]> {
        let v = [a12.clone(), lambda.clone() - a11.clone()];
        let nv = v[0].clone() * v[0].clone() + v[1].clone() * v[1].clone();
        let s = nv.try_sqrt()?;
        Some([v[0].clone() / s.clone(), v[1].clone() / s])
    };
    let ua = unit(&a)?;
    let ub = unit(&b)?;
    let mut o = Matrix::<F>::identity(4);
    o.set(1, 1, ua[0].clone());
    o.set(1, 2, ua[1].clone());
    o.set(2, 1, ub[0].clone());
    o.set(2, 2, ub[1].clone());
    g = o.mul(&g);
    Some(NodalCore { g, a, b })
}

pub fn nodal_normalize(p: &Pencil) -> Result<NodalFormResult> {
    nodal_normalize_with(p, DEFAULT_PRECISION)
}

pub fn nodal_normalize_with(p: &Pencil, precision_bits: u32) -> Result<NodalFormResult> {
    if precision_bits < 64 {
        return Err(Error::PrecisionTooLow(precision_bits));
    }
    let (s0, t0) = nodal_double_root(p)?;
    let m = nodal_basis(&s0, &t0);
    let pb = p.change_basis(&m)?;
    let (g1, d) = lagrange_diagonalize(pb.q0().matrix());
    let n1 = pb.q1().matrix().congruence(&g1);
    if !n1.get(3, 3).is_zero() {
        return Err(Error::NormalFormMismatch("vertex of the double-root member is off the base locus".into()));
    }

    if let Some(core) = nodal_core::<Rat>(&g1, &d, &n1, 0) {
        let (t0m, t1m) = tangency_target(&core.a, &core.b, 0);
        let ok = pb.q0().matrix().congruence(&core.g) == t0m && pb.q1().matrix().congruence(&core.g) == t1m;
        if !ok || core.a.is_zero() || core.b.is_zero() || core.a == core.b {
            return Err(Error::NormalFormMismatch("exact tangency normal form check failed".into()));
        }
        return Ok(NodalFormResult {
            a: FieldValue::Exact(core.a),
            b: FieldValue::Exact(core.b),
            g: FieldMatrix::Exact(core.g),
            m,
            path: ComputationPath::Exact,
            residual: Rat::zero(),
            precision_bits: 0,
        });
    }

    let mut bits = precision_bits;
    loop {
        let core = nodal_core::<Approx>(&g1, &d, &n1, bits + 32)
            .ok_or_else(|| Error::NormalFormMismatch("degenerate reflection".into()))?;
        let (t0m, t1m) = tangency_target(&core.a, &core.b, bits);
        let gc = CMat::from_approx(&core.g);
        let r0 = gc.mul(&CMat::from_rat(pb.q0().matrix())).mul(&gc.transpose());
        let r1 = gc.mul(&CMat::from_rat(pb.q1().matrix())).mul(&gc.transpose());
        let residual = std::cmp::max(
            r0.max_diff(&CMat::from_approx(&t0m)),
            r1.max_diff(&CMat::from_approx(&t1m)),
        );
        if residual_ok(&residual, bits) {
            return Ok(NodalFormResult {
                a: FieldValue::Numeric(core.a),
                b: FieldValue::Numeric(core.b),
                g: FieldMatrix::Numeric(core.g),
                m,
                path: ComputationPath::CertifiedNumeric,
                residual,
                precision_bits: bits,
            });
        }
        if bits >= MAX_PRECISION {
            return Err(Error::CertificationFailed { bits });
        }
        bits = (bits * 2).min(MAX_PRECISION);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodalCanonResult {
    /// `congruence_act(g, P.change_basis(m)) = W_node`
    pub g: FieldMatrix,
    pub m: FieldMatrix,
    /// Whether `x₁` and `x₂` were exchanged to order `a < b`.
    pub swapped: bool,
    pub normal_form: NodalFormResult,
    pub path: ComputationPath,
    #[serde(serialize_with = "ser_residual")]
    pub residual: Rat,
    pub precision_bits: u32,
}

/// Swap, reparameterization and final congruence taking `W_{a,b}` to
/// `W_node`.
fn canon_tail<F: Field>(a: &F, b: &F, swap: bool, bits: u32) -> (Matrix<F>, Matrix<F>) {
    let (a, b) = if swap { (b.clone(), a.clone()) } else { (a.clone(), b.clone()) };
    let one = F::lift(&Rat::one(), bits);
    let two = F::lift(&Rat::from_int(2), bits);
    let gamma = one.clone() / (b.clone() - a.clone());
    let beta = (b.clone() - two * a.clone()) / (b - a);
    let mut s = Matrix::<F>::identity(4);
    if swap {
        s.set(1, 1, F::zero());
        s.set(2, 2, F::zero());
        s.set(1, 2, one.clone());
        s.set(2, 1, one.clone());
    }
    let mut h = Matrix::<F>::identity(4);
    h.set(0, 3, -(beta.clone() / gamma.clone()));
    h.set(3, 3, one / gamma.clone());
    let m2 = Matrix::from_rows(vec![vec![F::one(), F::zero()], vec![beta, gamma]]);
    (h.mul(&s), m2)
}

pub fn nodal_canonicalize(p: &Pencil) -> Result<NodalCanonResult> {
    nodal_canonicalize_with(p, DEFAULT_PRECISION)
}

pub fn nodal_canonicalize_with(p: &Pencil, precision_bits: u32) -> Result<NodalCanonResult> {
    let nf = nodal_normalize_with(p, precision_bits)?;
    let w = crate::pencil::w_node();
    let m1 = Matrix::from_rows(nf.m.iter().map(|r| r.to_vec()).collect());
    match (&nf.a, &nf.b, &nf.g) {
        (FieldValue::Exact(a), FieldValue::Exact(b), FieldMatrix::Exact(g)) => {
            let swap = a > b;
            let (tail, m2) = canon_tail(a, b, swap, 0);
            let g = tail.mul(g);
            let m = m2.mul(&m1);
            let mm: Mat2 = [
                [m.get(0, 0).clone(), m.get(0, 1).clone()],
                [m.get(1, 0).clone(), m.get(1, 1).clone()],
            ];
            let image = p.change_basis(&mm)?.congruence_act(&g)?;
            if image != w {
                return Err(Error::NormalFormMismatch("canonical form differs from W_node".into()));
            }
            Ok(NodalCanonResult {
                g: FieldMatrix::Exact(g),
                m: FieldMatrix::Exact(m),
                swapped: swap,
                normal_form: nf,
                path: ComputationPath::Exact,
                residual: Rat::zero(),
                precision_bits: 0,
            })
        }
        _ => {
            let bits = nf.precision_bits.max(precision_bits);
            let to_approx = |v: &FieldValue| match v {
                FieldValue::Exact(r) => Approx::from_rat(r, bits + 32),
                FieldValue::Numeric(x) => x.clone(),
            };
            let (a, b) = (to_approx(&nf.a), to_approx(&nf.b));
            let swap = (&a.z.re, &a.z.im) > (&b.z.re, &b.z.im);
            let (tail, m2) = canon_tail(&a, &b, swap, bits + 32);
            let g_nf = match &nf.g {
                FieldMatrix::Exact(g) => g.map(|x| Approx::from_rat(x, bits + 32)),
                FieldMatrix::Numeric(g) => g.clone(),
            };
            let g = tail.mul(&g_nf);
            let m = m2.mul(&m1.map(|x| Approx::from_rat(x, bits + 32)));
            // members of the reparameterized pencil, then the congruence
            let mc = CMat::from_approx(&m);
            let (q0, q1) = (CMat::from_rat(p.q0().matrix()), CMat::from_rat(p.q1().matrix()));
            let member = |r: usize| {
                CMat::from_fn(4, 4, |i, j| &(mc.get(r, 0) * q0.get(i, j)) + &(mc.get(r, 1) * q1.get(i, j)))
            };
            let gc = CMat::from_approx(&g);
            let r0 = gc.mul(&member(0)).mul(&gc.transpose());
            let r1 = gc.mul(&member(1)).mul(&gc.transpose());
            let residual = std::cmp::max(
                r0.max_diff(&CMat::from_rat(w.q0().matrix())),
                r1.max_diff(&CMat::from_rat(w.q1().matrix())),
            );
            if !residual_ok(&residual, bits) {
                return Err(Error::NormalFormMismatch(format!(
                    "canonical form residual {} exceeds 2^-{}",
                    rat_to_decimal(&residual, 6),
                    bits / 2
                )));
            }
            Ok(NodalCanonResult {
                g: FieldMatrix::Numeric(g),
                m: FieldMatrix::Numeric(m),
                swapped: swap,
                normal_form: nf,
                path: ComputationPath::CertifiedNumeric,
                residual,
                precision_bits: bits,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodePoint {
    /// Projective coordinates, first nonzero entry 1.
    pub point: Vec<Rat>,
    /// Gram matrix of the local quadratic term in two residual variables.
    pub local_quadratic: Vec<Vec<Rat>>,
    pub local_quadratic_rank: usize,
    pub ordinary_node: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeReport {
    pub singular_points: Vec<NodePoint>,
    /// Rank of the 2×4 Jacobian of the base curve at each singular point.
    pub jacobian_ranks: Vec<usize>,
    /// Exactly one singular member has its vertex on the base locus and no
    /// member has rank below 3.
    pub unique: bool,
}

pub fn verify_node(p: &Pencil) -> Result<NodeReport> {
    let (s0, t0) = nodal_double_root(p)?;
    let m = nodal_basis(&s0, &t0);
    let pb = p.change_basis(&m)?;
    let mm = pb.q0().matrix();
    let nn = pb.q1().matrix();
    let v = linalg::kernel(mm).remove(0);
    if !bilinear(nn, &v, &v).is_zero() {
        return Err(Error::NormalFormMismatch("vertex of the double-root member is off the base locus".into()));
    }
    let grad = linalg::mat_vec(nn, &v);
    // Tangent plane of N at v, then a complement of v inside it.
    let tangent = linalg::kernel(&Matrix::from_rows(vec![grad.clone()]));
    let mut residual_dirs: Vec<Vec<Rat>> = Vec::new();
    for w in &tangent {
        let mut trial = vec![v.clone()];
        trial.extend(residual_dirs.iter().cloned());
        trial.push(w.clone());
        if linalg::rank(&Matrix::from_rows(trial.clone())) == trial.len() {
            residual_dirs.push(w.clone());
        }
    }
    let gram: Vec<Vec<Rat>> = residual_dirs
        .iter()
        .map(|a| residual_dirs.iter().map(|b| bilinear(mm, a, b)).collect())
        .collect();
    let local_rank = linalg::rank(&Matrix::from_rows(gram.clone()));
    let jac = Matrix::from_rows(vec![linalg::mat_vec(mm, &v), grad]);
    let jacobian_rank = linalg::rank(&jac);

    let members = p.singular_members()?;
    let on_base = members.iter().filter(|s| s.rank == 3 && s.vertex_on_base_locus).count();
    let unique = on_base == 1 && members.iter().all(|s| s.rank == 3);

    Ok(NodeReport {
        singular_points: vec![NodePoint {
            point: normalize_point(v),
            local_quadratic: gram,
            local_quadratic_rank: local_rank,
            ordinary_node: residual_dirs.len() == 2 && local_rank == 2,
        }],
        jacobian_ranks: vec![jacobian_rank],
        unique,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::{mat2_identity, tangency_pencil, w_node};
    use crate::rat::qi;

    fn diag0123() -> Pencil {
        diagonal_pencil(&[qi(0), qi(1), qi(2), qi(3)]).unwrap()
    }

    #[test]
    fn diagonal_pencil_discriminant() {
        let f = diag0123().discriminant_quartic();
        let expected = crate::quartic::BinaryQuartic::from_roots(&[qi(0), qi(-1), qi(-2), qi(-3)]);
        assert_eq!(f, expected);
        assert_eq!(
            diagonal_pencil(&[qi(1), qi(1), qi(2), qi(3)]),
            Err(Error::RepeatedLambda)
        );
    }

    #[test]
    fn diagonalize_already_diagonal() {
        let r = simultaneous_diagonalize(&diag0123()).unwrap();
        assert_eq!(r.path, ComputationPath::Exact);
        assert_eq!(r.transform, FieldMatrix::Exact(Matrix::identity(4)));
        assert_eq!(
            r.lambdas,
            vec![qi(0), qi(1), qi(2), qi(3)].into_iter().map(Eigenvalue::Exact).collect::<Vec<_>>()
        );
    }

    #[test]
    fn diagonalize_rejects_nodal() {
        assert_eq!(simultaneous_diagonalize(&w_node()), Err(Error::NotSmooth));
    }

    #[test]
    fn diagonalize_after_congruence_is_numeric_and_certified() {
        let g = Matrix::from_rows(vec![
            vec![qi(1), qi(2), qi(0), qi(1)],
            vec![qi(0), qi(1), qi(3), qi(0)],
            vec![qi(1), qi(0), qi(1), qi(-1)],
            vec![qi(2), qi(0), qi(0), qi(1)],
        ]);
        let p = diag0123().congruence_act(&g).unwrap();
        let r = simultaneous_diagonalize(&p).unwrap();
        assert!(residual_ok(&r.residual, r.precision_bits.max(1)));
        let mut ls: Vec<Rat> = r
            .lambdas
            .iter()
            .map(|l| match l {
                Eigenvalue::Exact(x) => x.clone(),
                Eigenvalue::Certified(c) => c.exact.clone().unwrap(),
            })
            .collect();
        ls.sort();
        assert_eq!(ls, vec![qi(0), qi(1), qi(2), qi(3)]);
    }

    #[test]
    fn diagonalize_with_singular_q0() {
        // Q0 = diag(0,1,2,3) is singular; first smooth member is Q0 + Q1
        let p = Pencil::new(
            SymMat4::diagonal([qi(0), qi(1), qi(2), qi(3)]),
            SymMat4::diagonal([qi(1), qi(1), qi(1), qi(1)]),
        )
        .unwrap();
        let r = simultaneous_diagonalize(&p).unwrap();
        assert_eq!(r.basis, [[qi(1), qi(1)], [qi(0), qi(1)]]);
        assert!(r.residual.is_zero() || residual_ok(&r.residual, r.precision_bits));
    }

    #[test]
    fn w_node_normal_form_is_identity() {
        let r = nodal_normalize(&w_node()).unwrap();
        assert_eq!(r.path, ComputationPath::Exact);
        assert_eq!((r.a.exact().unwrap(), r.b.exact().unwrap()), (&qi(1), &qi(2)));
        assert_eq!(r.g, FieldMatrix::Exact(Matrix::identity(4)));
        assert_eq!(r.m, mat2_identity());
    }

    #[test]
    fn normal_form_rejects_smooth() {
        assert_eq!(nodal_normalize(&diag0123()), Err(Error::NotNodal));
        assert_eq!(nodal_canonicalize(&diag0123()), Err(Error::NotNodal));
        assert_eq!(verify_node(&diag0123()), Err(Error::NotNodal));
    }

    #[test]
    fn canonicalize_fixed_point_and_swap() {
        let r = nodal_canonicalize(&w_node()).unwrap();
        assert_eq!(r.g, FieldMatrix::Exact(Matrix::identity(4)));
        assert_eq!(r.m, FieldMatrix::Exact(Matrix::identity(2)));
        assert!(!r.swapped);

        let r = nodal_canonicalize(&tangency_pencil(&qi(2), &qi(1))).unwrap();
        assert!(r.swapped);
        assert_eq!(r.m, FieldMatrix::Exact(Matrix::identity(2)));
        let swap = Matrix::from_rows(vec![
            vec![qi(1), qi(0), qi(0), qi(0)],
            vec![qi(0), qi(0), qi(1), qi(0)],
            vec![qi(0), qi(1), qi(0), qi(0)],
            vec![qi(0), qi(0), qi(0), qi(1)],
        ]);
        assert_eq!(r.g, FieldMatrix::Exact(swap));
    }

    #[test]
    fn canonicalize_w35_exactly() {
        let r = nodal_canonicalize(&tangency_pencil(&qi(3), &qi(5))).unwrap();
        assert_eq!(r.path, ComputationPath::Exact);
        let nf = &r.normal_form;
        assert_eq!((nf.a.exact().unwrap(), nf.b.exact().unwrap()), (&qi(3), &qi(5)));
    }

    #[test]
    fn canonicalize_after_random_congruence() {
        let g = Matrix::from_rows(vec![
            vec![qi(2), qi(1), qi(0), qi(0)],
            vec![qi(0), qi(1), qi(1), qi(0)],
            vec![qi(1), qi(0), qi(3), qi(1)],
            vec![qi(0), qi(-1), qi(0), qi(1)],
        ]);
        let p = w_node().congruence_act(&g).unwrap();
        let r = nodal_canonicalize(&p).unwrap();
        assert!(r.residual.is_zero() || residual_ok(&r.residual, r.precision_bits));
    }

    #[test]
    fn lagrange_handles_zero_diagonal() {
        let m = SymMat4::from_monomials(&[(0, 1, qi(1)), (2, 3, qi(1))]);
        let (g, d) = lagrange_diagonalize(m.matrix());
        let c = m.matrix().congruence(&g);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { d[i].clone() } else { qi(0) };
                assert_eq!(c.get(i, j), &expect);
            }
        }
        assert!(d.iter().all(|x| !x.is_zero()));
    }

    #[test]
    fn node_of_w_node() {
        let r = verify_node(&w_node()).unwrap();
        assert_eq!(r.singular_points.len(), 1);
        let pt = &r.singular_points[0];
        assert_eq!(pt.point, vec![qi(0), qi(0), qi(0), qi(1)]);
        assert_eq!(pt.local_quadratic_rank, 2);
        assert!(pt.ordinary_node);
        assert_eq!(pt.local_quadratic, vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]]);
        assert_eq!(r.jacobian_ranks, vec![1]);
        assert!(r.unique);
    }

    #[test]
    fn node_moves_with_congruence() {
        let g = Matrix::from_rows(vec![
            vec![qi(1), qi(1), qi(0), qi(0)],
            vec![qi(0), qi(1), qi(0), qi(2)],
            vec![qi(0), qi(0), qi(1), qi(0)],
            vec![qi(1), qi(0), qi(0), qi(1)],
        ]);
        let p = w_node().congruence_act(&g).unwrap();
        let r = verify_node(&p).unwrap();
        // the singular point of gQg^T is g^{-T} e3
        let ginv_t = linalg::inverse(&g).unwrap().transpose();
        let expected = normalize_point((0..4).map(|i| ginv_t.get(i, 3).clone()).collect());
        assert_eq!(r.singular_points[0].point, expected);
        assert!(r.singular_points[0].ordinary_node);
        assert!(r.unique);
    }
}
