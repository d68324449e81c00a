//! Hermitian symmetric domains, the action of `GU^+` by linear fractional
//! transformations, automorphy factors and the scalar-weight slash operator.
//!
//! Two models are supported and never transported into each other:
//! the bounded domain `H_{a,b} = { z in M_{a x b} : 1 - z* z > 0 }` with the
//! group preserving `I_{a,b}` up to a positive scalar, and the unbounded
//! domain `H_n = { Z : (Z - Z*)/2i > 0 }` with the group preserving
//! `eta_n = [[0, -1], [1, 0]]` up to a positive scalar.

mod cmatrix;
pub mod random;

pub use cmatrix::CMatrix;

use std::sync::Arc;

use rug::Float;

use crate::error::{Error, Result};
use crate::exactarith::BigComplex;

/// Tolerance for definiteness minors at the default precision.
pub const EPS_PD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Bounded { a: usize, b: usize },
    Unbounded { n: usize },
}

impl DomainKind {
    /// Size of the square group matrices acting on this domain.
    pub fn group_dim(&self) -> usize {
        match *self {
            DomainKind::Bounded { a, b } => a + b,
            DomainKind::Unbounded { n } => 2 * n,
        }
    }

    /// Split point of the block decomposition.
    fn top(&self) -> usize {
        match *self {
            DomainKind::Bounded { a, .. } => a,
            DomainKind::Unbounded { n } => n,
        }
    }

    fn point_shape(&self) -> (usize, usize) {
        match *self {
            DomainKind::Bounded { a, b } => (a, b),
            DomainKind::Unbounded { n } => (n, n),
        }
    }

    /// The preserved form: `I_{a,b}` or `eta_n`.
    pub fn form(&self, prec: u32) -> CMatrix {
        match *self {
            DomainKind::Bounded { a, b } => CMatrix::from_fn(a + b, a + b, |i, j| {
                if i != j {
                    BigComplex::zero(prec)
                } else if i < a {
                    BigComplex::one(prec)
                } else {
                    -BigComplex::one(prec)
                }
            }),
            DomainKind::Unbounded { n } => CMatrix::from_fn(2 * n, 2 * n, |i, j| {
                if j == i + n {
                    -BigComplex::one(prec)
                } else if i == j + n {
                    BigComplex::one(prec)
                } else {
                    BigComplex::zero(prec)
                }
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainPoint {
    kind: DomainKind,
    z: CMatrix,
}

impl DomainPoint {
    pub fn new(kind: DomainKind, z: CMatrix) -> Result<Self> {
        let (r, c) = kind.point_shape();
        if z.rows() != r || z.cols() != c {
            return Err(Error::DimensionMismatch(format!(
                "point is {}x{}, domain needs {r}x{c}",
                z.rows(),
                z.cols()
            )));
        }
        Ok(Self { kind, z })
    }

    /// `i 1_n` in `H_n`.
    pub fn base_point(n: usize, prec: u32) -> Self {
        Self { kind: DomainKind::Unbounded { n }, z: CMatrix::scalar(n, &BigComplex::i(prec)) }
    }

    /// A point of the upper half plane `H_1`.
    pub fn upper_half_plane(z: BigComplex) -> Self {
        Self { kind: DomainKind::Unbounded { n: 1 }, z: CMatrix::scalar(1, &z) }
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn z(&self) -> &CMatrix {
        &self.z
    }

    /// The scalar coordinate of a point of `H_1`.
    pub fn scalar(&self) -> &BigComplex {
        &self.z[(0, 0)]
    }
}

pub fn in_domain(p: &DomainPoint) -> Result<bool> {
    in_domain_with(p, EPS_PD)
}

pub fn in_domain_with(p: &DomainPoint, eps: f64) -> Result<bool> {
    let prec = p.z.prec();
    match p.kind {
        DomainKind::Bounded { b, .. } => {
            let m = CMatrix::identity(prec, b).sub(&p.z.star().mul(&p.z));
            Ok(m.is_positive_definite(eps))
        }
        DomainKind::Unbounded { .. } => {
            if !p.z.is_square() {
                return Err(Error::DimensionMismatch("unbounded points must be square".into()));
            }
            // (Z - Z*) / 2i
            let half_over_i = BigComplex::from_f64(prec, 0.0, -0.5);
            let y = p.z.sub(&p.z.star()).scale(&half_over_i);
            Ok(y.is_positive_definite(eps))
        }
    }
}

/// An element of `GU^+` for one of the two models, with its similitude
/// factor `nu > 0` (`g F g* = nu F`).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    kind: DomainKind,
    g: CMatrix,
    nu: Float,
}

impl GroupElement {
    /// Validates `g F g* = nu F` for some `nu > 0` to relative tolerance `tol`.
    pub fn new(kind: DomainKind, g: CMatrix, tol: f64) -> Result<Self> {
        let m = kind.group_dim();
        if g.rows() != m || g.cols() != m {
            return Err(Error::DimensionMismatch(format!("group element must be {m}x{m}")));
        }
        let prec = g.prec();
        let form = kind.form(prec);
        let t = g.mul(&form).mul(&g.star());
        // read nu off an entry where the form is nonzero
        let (i, j) = match kind {
            DomainKind::Bounded { .. } => (0, 0),
            DomainKind::Unbounded { n } => (n, 0),
        };
        let nu_c = &t[(i, j)] / &form[(i, j)];
        let nu = nu_c.re.clone();
        if !(nu.to_f64() > 0.0) {
            return Err(Error::NotSimilitude("similitude factor is not positive".into()));
        }
        let scaled = form.scale(&BigComplex::from_real(nu.clone()));
        if t.rel_diff(&scaled) > tol {
            return Err(Error::NotSimilitude(format!(
                "g F g* deviates from nu F by {:.3e}",
                t.rel_diff(&scaled)
            )));
        }
        Ok(Self { kind, g, nu })
    }

    pub fn identity(kind: DomainKind, prec: u32) -> Self {
        Self { kind, g: CMatrix::identity(prec, kind.group_dim()), nu: Float::with_val(prec, 1) }
    }

    /// `eta_n = [[0, -1], [1, 0]]`.
    pub fn eta(n: usize, prec: u32) -> Self {
        let kind = DomainKind::Unbounded { n };
        Self { kind, g: kind.form(prec), nu: Float::with_val(prec, 1) }
    }

    /// `[[1, X], [0, 1]]` for Hermitian `X`.
    pub fn translation(x: &CMatrix) -> Result<Self> {
        let n = x.rows();
        let prec = x.prec();
        let g = CMatrix::from_blocks(
            &CMatrix::identity(prec, n),
            x,
            &CMatrix::zeros(prec, n, n),
            &CMatrix::identity(prec, n),
        );
        Self::new(DomainKind::Unbounded { n }, g, 1e-20)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.g
    }

    pub fn nu(&self) -> &Float {
        &self.nu
    }

    /// `(a, b, c, d)` blocks.
    pub fn blocks(&self) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
        let t = self.kind.top();
        let m = self.kind.group_dim();
        (
            self.g.block(0, t, 0, t),
            self.g.block(0, t, t, m),
            self.g.block(t, m, 0, t),
            self.g.block(t, m, t, m),
        )
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::DimensionMismatch("elements act on different domains".into()));
        }
        let nu = Float::with_val(self.nu.prec(), &self.nu * &other.nu);
        Ok(Self { kind: self.kind, g: self.g.mul(&other.g), nu })
    }
}

fn check_kinds(g: &GroupElement, p: &DomainPoint) -> Result<()> {
    if g.kind != p.kind {
        return Err(Error::DimensionMismatch(format!("{:?} acting on {:?}", g.kind, p.kind)));
    }
    Ok(())
}

/// `g z = (a z + b)(c z + d)^{-1}`.
pub fn act(g: &GroupElement, p: &DomainPoint) -> Result<DomainPoint> {
    check_kinds(g, p)?;
    let (a, b, c, d) = g.blocks();
    let num = a.mul(&p.z).add(&b);
    let den = c.mul(&p.z).add(&d);
    let inv = den
        .inverse()
        .map_err(|_| Error::Numerical("c z + d is singular".into()))?;
    let out = DomainPoint { kind: p.kind, z: num.mul(&inv) };
    if !in_domain(&out)? {
        return Err(Error::Numerical("image left the domain".into()));
    }
    Ok(out)
}

/// The pair `(lambda, mu)` of automorphy factors.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphyPair {
    pub lambda: CMatrix,
    pub mu: CMatrix,
}

/// Unbounded: `lambda = conj(c) z^t + conj(d)`, `mu = c z + d`.
/// Bounded: `lambda = conj(b) z^t + conj(a)`, `mu = c z + d`.
pub fn automorphy_factors(g: &GroupElement, p: &DomainPoint) -> Result<AutomorphyPair> {
    check_kinds(g, p)?;
    let (a, b, c, d) = g.blocks();
    let zt = p.z.transpose();
    let mu = c.mul(&p.z).add(&d);
    let lambda = match g.kind {
        DomainKind::Unbounded { .. } => c.conj().mul(&zt).add(&d.conj()),
        DomainKind::Bounded { .. } => b.conj().mul(&zt).add(&a.conj()),
    };
    if mu.det().is_zero() {
        return Err(Error::Numerical("mu is singular".into()));
    }
    Ok(AutomorphyPair { lambda, mu })
}

/// `j(g, z) = det mu(g, z)`.
pub fn scalar_j(g: &GroupElement, p: &DomainPoint) -> Result<BigComplex> {
    Ok(automorphy_factors(g, p)?.mu.det())
}

/// A function on a domain, evaluable at points.
pub type DomainFn = Arc<dyn Fn(&DomainPoint) -> Result<BigComplex> + Send + Sync>;

/// `(f |_k g)(z) = j(g, z)^{-k} f(g z)`.
pub fn slash_scalar(f: DomainFn, g: GroupElement, k: i64) -> DomainFn {
    Arc::new(move |p: &DomainPoint| {
        let gz = act(&g, p)?;
        let j = scalar_j(&g, p)?;
        Ok(&f(&gz)? * &j.powi(-k))
    })
}

/// `[[(u1+u2)/2, (u1-u2)/2i], [-(u1-u2)/2i, (u1+u2)/2]]`, which fixes `i 1_n`
/// for any pair of unitary matrices `u1, u2`.
pub fn stabilizer_element(u1: &CMatrix, u2: &CMatrix) -> Result<GroupElement> {
    let n = u1.rows();
    let prec = u1.prec();
    let half = BigComplex::from_f64(prec, 0.5, 0.0);
    let half_over_i = BigComplex::from_f64(prec, 0.0, -0.5);
    let a = u1.add(u2).scale(&half);
    let b = u1.sub(u2).scale(&half_over_i);
    let g = CMatrix::from_blocks(&a, &b, &b.scale(&-BigComplex::one(prec)), &a);
    GroupElement::new(DomainKind::Unbounded { n }, g, 1e-25)
}

#[cfg(test)]
mod tests {
    use super::random::*;
    use super::*;
    use crate::exactarith::complex::q_of;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const P: u32 = 128;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(P, re, im)
    }

    #[test]
    fn membership_examples() {
        let zero = DomainPoint::new(DomainKind::Bounded { a: 2, b: 1 }, CMatrix::zeros(P, 2, 1)).unwrap();
        assert!(in_domain(&zero).unwrap());
        for n in 1..=3 {
            assert!(in_domain(&DomainPoint::base_point(n, P)).unwrap());
            let minus = DomainPoint::new(DomainKind::Unbounded { n }, CMatrix::scalar(n, &c(0.0, -1.0))).unwrap();
            assert!(!in_domain(&minus).unwrap());
        }
        assert!(DomainPoint::new(DomainKind::Unbounded { n: 2 }, CMatrix::zeros(P, 2, 1)).is_err());
    }

    #[test]
    fn action_examples() {
        let p = DomainPoint::upper_half_plane(c(0.3, 1.7));
        let id = GroupElement::identity(DomainKind::Unbounded { n: 1 }, P);
        assert!(act(&id, &p).unwrap().z.rel_diff(&p.z) < 1e-35);

        let i = DomainPoint::upper_half_plane(c(0.0, 1.0));
        let eta = GroupElement::eta(1, P);
        assert!(act(&eta, &i).unwrap().z.rel_diff(&i.z) < 1e-35);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_hermitian(2, P, &mut rng);
        let z = random_unbounded_point(2, P, &mut rng);
        let t = GroupElement::translation(&x).unwrap();
        assert!(act(&t, &z).unwrap().z.rel_diff(&z.z.add(&x)) < 1e-30);
    }

    #[test]
    fn automorphy_examples() {
        for n in 1..=3 {
            let base = DomainPoint::base_point(n, P);
            let id = GroupElement::identity(DomainKind::Unbounded { n }, P);
            let f = automorphy_factors(&id, &base).unwrap();
            assert!(f.lambda.rel_diff(&CMatrix::identity(P, n)) < 1e-35);
            assert!(f.mu.rel_diff(&CMatrix::identity(P, n)) < 1e-35);

            let eta = GroupElement::eta(n, P);
            let f = automorphy_factors(&eta, &base).unwrap();
            let i_n = CMatrix::scalar(n, &c(0.0, 1.0));
            assert!(f.lambda.rel_diff(&i_n) < 1e-35 && f.mu.rel_diff(&i_n) < 1e-35);
            assert!(scalar_j(&eta, &base).unwrap().rel_diff(&c(0.0, 1.0).powi(n as i64)) < 1e-35);
            assert!(scalar_j(&id, &base).unwrap().rel_diff(&c(1.0, 0.0)) < 1e-35);

            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let t = GroupElement::translation(&random_hermitian(n, P, &mut rng)).unwrap();
            let z = random_unbounded_point(n, P, &mut rng);
            assert!(automorphy_factors(&t, &z).unwrap().mu.rel_diff(&CMatrix::identity(P, n)) < 1e-35);
        }
    }

    #[test]
    fn cocycles_and_action_axiom() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 1..=3 {
            for _ in 0..20 {
                let g = random_unbounded_element(n, P, &mut rng);
                let h = random_unbounded_element(n, P, &mut rng);
                let z = random_unbounded_point(n, P, &mut rng);
                let gh = g.compose(&h).unwrap();
                let hz = act(&h, &z).unwrap();
                assert!(act(&g, &hz).unwrap().z.rel_diff(&act(&gh, &z).unwrap().z) < 1e-9);
                let f_gh = automorphy_factors(&gh, &z).unwrap();
                let f_g = automorphy_factors(&g, &hz).unwrap();
                let f_h = automorphy_factors(&h, &z).unwrap();
                assert!(f_gh.mu.rel_diff(&f_g.mu.mul(&f_h.mu)) < 1e-9);
                assert!(f_gh.lambda.rel_diff(&f_g.lambda.mul(&f_h.lambda)) < 1e-9);
            }
        }
    }

    #[test]
    fn bounded_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            for _ in 0..10 {
                let g = random_bounded_element(a, b, P, &mut rng);
                let h = random_bounded_element(a, b, P, &mut rng);
                let z = random_bounded_point(a, b, P, &mut rng);
                assert!(in_domain(&z).unwrap());
                let gh = g.compose(&h).unwrap();
                let hz = act(&h, &z).unwrap();
                assert!(act(&g, &hz).unwrap().z.rel_diff(&act(&gh, &z).unwrap().z) < 1e-9);
                let f_gh = automorphy_factors(&gh, &z).unwrap();
                let f_g = automorphy_factors(&g, &hz).unwrap();
                let f_h = automorphy_factors(&h, &z).unwrap();
                assert!(f_gh.mu.rel_diff(&f_g.mu.mul(&f_h.mu)) < 1e-9);
                assert!(f_gh.lambda.rel_diff(&f_g.lambda.mul(&f_h.lambda)) < 1e-9);
            }
        }
    }

    #[test]
    fn det_lambda_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            for _ in 0..10 {
                let g = random_unbounded_element(n, P, &mut rng);
                let z = random_unbounded_point(n, P, &mut rng);
                let f = automorphy_factors(&g, &z).unwrap();
                let nu_pow = Float::with_val(P, rug::ops::Pow::pow(g.nu(), -(n as i32)));
                let rhs = &(&g.matrix().conj().det() * &f.mu.det()).scale(&nu_pow) * &BigComplex::one(P);
                assert!(f.lambda.det().rel_diff(&rhs) < 1e-9);
            }
        }
    }

    #[test]
    fn stabilizer_fixes_base_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 1..=3 {
            let base = DomainPoint::base_point(n, P);
            for _ in 0..10 {
                let k = stabilizer_element(&random_unitary(n, P, &mut rng), &random_unitary(n, P, &mut rng)).unwrap();
                assert!(act(&k, &base).unwrap().z.rel_diff(&base.z) < 1e-10);
            }
        }
    }

    #[test]
    fn non_similitude_rejected() {
        let g = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.0, 1.0),
            (1, 1) => c(1.0, 0.0),
            _ => c(0.0, 0.0),
        });
        assert!(GroupElement::new(DomainKind::Unbounded { n: 1 }, g, 1e-12).is_err());
        let scaled = CMatrix::scalar(2, &c(2.0, 0.0));
        let e = GroupElement::new(DomainKind::Unbounded { n: 1 }, scaled, 1e-12).unwrap();
        assert!((e.nu().to_f64() - 4.0).abs() < 1e-30);
    }

    fn e4(p: &DomainPoint) -> Result<BigComplex> {
        // 1 + 240 sum sigma_3(n) q^n
        let q = q_of(p.scalar());
        let mut acc = BigComplex::one(P);
        let mut qn = BigComplex::one(P);
        let tiny = Float::with_val(P, Float::i_exp(1, -(P as i32) - 10));
        for n in 1..5000u64 {
            qn = &qn * &q;
            let s: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum();
            let term = qn.scale(&Float::with_val(P, 240 * s));
            acc = &acc + &term;
            if term.abs() < tiny {
                break;
            }
        }
        Ok(acc)
    }

    #[test]
    fn slash_examples() {
        let f: DomainFn = Arc::new(e4);
        let z = DomainPoint::upper_half_plane(c(0.21, 1.3));
        let id = GroupElement::identity(DomainKind::Unbounded { n: 1 }, P);
        assert!(slash_scalar(f.clone(), id, 4)(&z).unwrap().rel_diff(&e4(&z).unwrap()) < 1e-35);

        let sl2 = |a: i64, b: i64, cc: i64, d: i64| {
            let g = CMatrix::from_fn(2, 2, |i, j| c([[a, b], [cc, d]][i][j] as f64, 0.0));
            GroupElement::new(DomainKind::Unbounded { n: 1 }, g, 1e-30).unwrap()
        };
        let g = sl2(2, 1, 1, 1);
        let weight0 = slash_scalar(f.clone(), g.clone(), 0)(&z).unwrap();
        assert!(weight0.rel_diff(&e4(&act(&g, &z).unwrap()).unwrap()) < 1e-35);
        for g in [sl2(2, 1, 1, 1), sl2(1, -1, 1, 0), sl2(3, 2, 1, 1), sl2(0, -1, 1, 0)] {
            let v = slash_scalar(f.clone(), g, 4)(&z).unwrap();
            assert!(v.rel_diff(&e4(&z).unwrap()) < 1e-8);
        }
        let g = sl2(2, 1, 1, 1);
        let h = sl2(1, 1, 0, 1);
        let lhs = slash_scalar(slash_scalar(f.clone(), g.clone(), 6), h.clone(), 6)(&z).unwrap();
        let rhs = slash_scalar(f, g.compose(&h).unwrap(), 6)(&z).unwrap();
        assert!(lhs.rel_diff(&rhs) < 1e-30);
    }
}
