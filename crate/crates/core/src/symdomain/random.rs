//! Random points and group elements for property checks. Group elements are
//! built without exponentials: Cayley transforms of Lie algebra elements,
//! and products `p k` with `p` in the Siegel parabolic and `k` in the
//! stabilizer of `i 1_n`.

use rand::Rng;

use super::{stabilizer_element, CMatrix, DomainKind, DomainPoint, GroupElement};
use crate::exactarith::BigComplex;

fn c(prec: u32, re: f64, im: f64) -> BigComplex {
    BigComplex::from_f64(prec, re, im)
}

pub fn random_matrix(rows: usize, cols: usize, prec: u32, rng: &mut impl Rng) -> CMatrix {
    let vals: Vec<(f64, f64)> = (0..rows * cols)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    CMatrix::from_fn(rows, cols, |i, j| {
        let (re, im) = vals[i * cols + j];
        c(prec, re, im)
    })
}

pub fn random_hermitian(n: usize, prec: u32, rng: &mut impl Rng) -> CMatrix {
    let m = random_matrix(n, n, prec, rng);
    m.add(&m.star()).scale(&c(prec, 0.5, 0.0))
}

/// `(1 - S)(1 + S)^{-1}` for a random skew-Hermitian `S`.
pub fn random_unitary(n: usize, prec: u32, rng: &mut impl Rng) -> CMatrix {
    let s = random_hermitian(n, prec, rng).scale(&c(prec, 0.0, 1.0));
    let one = CMatrix::identity(prec, n);
    one.sub(&s).mul(&one.add(&s).inverse().expect("1 + S is invertible for skew-Hermitian S"))
}

/// `X + iY` with `X` Hermitian and `Y = M M* + 1/2`.
pub fn random_unbounded_point(n: usize, prec: u32, rng: &mut impl Rng) -> DomainPoint {
    let x = random_hermitian(n, prec, rng);
    let m = random_matrix(n, n, prec, rng);
    let y = m.mul(&m.star()).add(&CMatrix::scalar(n, &c(prec, 0.5, 0.0)));
    let z = x.add(&y.scale(&c(prec, 0.0, 1.0)));
    DomainPoint::new(DomainKind::Unbounded { n }, z).expect("square point")
}

/// A random `a x b` matrix with Frobenius norm below one.
pub fn random_bounded_point(a: usize, b: usize, prec: u32, rng: &mut impl Rng) -> DomainPoint {
    let m = random_matrix(a, b, prec, rng);
    let fro: f64 = (0..a)
        .flat_map(|i| (0..b).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)].norm_sqr().to_f64())
        .sum::<f64>()
        .sqrt();
    let r = rng.gen_range(0.1..0.9) / fro.max(1e-3);
    DomainPoint::new(DomainKind::Bounded { a, b }, m.scale(&c(prec, r, 0.0))).expect("shape")
}

/// `n(X) m(A) s(nu) k` with `k` from a pair of random unitaries.
pub fn random_unbounded_element(n: usize, prec: u32, rng: &mut impl Rng) -> GroupElement {
    let kind = DomainKind::Unbounded { n };
    let one = CMatrix::identity(prec, n);
    let zero = CMatrix::zeros(prec, n, n);
    let x = random_hermitian(n, prec, rng);
    let a = one.add(&random_matrix(n, n, prec, rng).scale(&c(prec, 0.3, 0.0)));
    let a_star_inv = a.star().inverse().expect("perturbation of identity is invertible");
    let nu = rng.gen_range(0.5..2.0);
    let translation = CMatrix::from_blocks(&one, &x, &zero, &one);
    let levi = CMatrix::from_blocks(&a, &zero, &zero, &a_star_inv);
    let sim = CMatrix::from_blocks(&CMatrix::scalar(n, &c(prec, nu, 0.0)), &zero, &zero, &one);
    let k = stabilizer_element(&random_unitary(n, prec, rng), &random_unitary(n, prec, rng))
        .expect("stabilizer element");
    let g = translation.mul(&levi).mul(&sim).mul(k.matrix());
    GroupElement::new(kind, g, 1e-25).expect("constructed element preserves the form")
}

/// `c (1 - X)(1 + X)^{-1}` with `X = I_{a,b} S`, `S` skew-Hermitian.
pub fn random_bounded_element(a: usize, b: usize, prec: u32, rng: &mut impl Rng) -> GroupElement {
    let kind = DomainKind::Bounded { a, b };
    let m = a + b;
    let s = random_hermitian(m, prec, rng).scale(&c(prec, 0.0, 1.0));
    let x = kind.form(prec).mul(&s);
    let one = CMatrix::identity(prec, m);
    let g0 = one.sub(&x).mul(&one.add(&x).inverse().expect("Cayley transform"));
    let scale = rng.gen_range(0.7..1.4);
    GroupElement::new(kind, g0.scale(&c(prec, scale, 0.0)), 1e-25).expect("Cayley element preserves the form")
}
