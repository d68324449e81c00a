use super::*;
use crate::exactarith::rational::{int, rat};
use crate::exactarith::divisor_sum;
use proptest::prelude::*;

const PREC: u32 = 160;

fn e4(bound: usize) -> NearlyHolomorphic {
    let mut c = vec![int(1)];
    for n in 1..=bound as u64 {
        c.push(Rational::from(divisor_sum(n, 3).unwrap() * 240));
    }
    NearlyHolomorphic::holomorphic(4, &c).unwrap()
}

fn z(x: f64, y: f64) -> BigComplex {
    BigComplex::from_f64(PREC, x, y)
}

#[test]
fn examples() {
    let one = NearlyHolomorphic::holomorphic(6, &[int(1), int(0)]).unwrap();
    let d = delta(6, &one).unwrap();
    assert_eq!(d.weight(), 8);
    assert_eq!(d.depth(), 1);
    assert_eq!(d.coeff(0, 0), int(0));
    assert_eq!(d.coeff(0, 1), int(-6));

    let q = NearlyHolomorphic::holomorphic(4, &[int(0), int(1)]).unwrap();
    let d = delta(4, &q).unwrap();
    assert_eq!(d.coeff(1, 0), int(1));
    assert_eq!(d.coeff(1, 1), int(-4));
    assert_eq!(delta(4, &d).unwrap_err(), Error::Precondition("delta_4 applied to weight 6".into()));
    assert_eq!(delta_iter(4, 3, &q).unwrap().depth(), 3);
}

#[test]
fn iteration_is_composition() {
    let f = e4(10);
    assert_eq!(delta_iter(4, 0, &f).unwrap(), f);
    let two = delta(6, &delta(4, &f).unwrap()).unwrap();
    assert_eq!(delta_iter(4, 2, &f).unwrap(), two);
    assert_eq!(two.weight(), 8);
}

#[test]
fn holomorphic_slice_is_theta() {
    let f = e4(30);
    let d = delta(4, &f).unwrap();
    for n in 0..=30 {
        assert_eq!(d.coeff(n, 0), f.coeff(n, 0) * int(n as i64));
    }
}

/// The same operator worked out in the basis `q^n y^(-j)` with coefficients
/// `c pi^(-j)`: `d/dz y^(-j) = -j y^(-j-1) / 2i`, so
/// `delta(q^n y^-j) = n q^n y^-j + (j - lambda) / (4 pi) q^n y^(-j-1)`.
/// Converting to `Y = 1/(4 pi y)` multiplies the `y^-j` coefficient by
/// `(4 pi)^j`.
fn symbolic_oracle(lambda: i64, table: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    // y-basis coefficient is table[j][n] / 4^j (pi powers tracked implicitly).
    let four = |j: usize| Rational::from(BigInt::from(4).pow(j as u32));
    let ybasis: Vec<Vec<Rational>> = table.iter().enumerate().map(|(j, r)| r.iter().map(|c| c / four(j)).collect()).collect();
    let mut out = vec![vec![Rational::zero(); table[0].len()]; table.len() + 1];
    for (j, row) in ybasis.iter().enumerate() {
        for (n, c) in row.iter().enumerate() {
            out[j][n] += c * int(n as i64);
            out[j + 1][n] += c * int(j as i64 - lambda) / int(4);
        }
    }
    out.into_iter().enumerate().map(|(j, r)| r.into_iter().map(|c| c * four(j)).collect()).collect()
}

/// `d/dz = (d/dx - i d/dy) / 2` by central differences with step `h` and
/// `h / 2`, Richardson-combined.
fn fd_delta(lambda: i64, f: &dyn Fn(&BigComplex) -> BigComplex, z0: &BigComplex, h: f64) -> BigComplex {
    let d = |h: f64| {
        let hx = BigComplex::from_f64(PREC, h, 0.0);
        let hy = BigComplex::from_f64(PREC, 0.0, h);
        let dx = (&f(&(z0 + &hx)) - &f(&(z0 - &hx))).scale_f64(0.5 / h);
        let dy = (&f(&(z0 + &hy)) - &f(&(z0 - &hy))).scale_f64(0.5 / h);
        (&dx - &(&BigComplex::i(PREC) * &dy)).scale_f64(0.5)
    };
    let dz = (&d(h / 2.0).scale_f64(4.0) - &d(h)).scale_f64(1.0 / 3.0);
    let pi = BigComplex::pi(PREC);
    // delta = (1 / 2 pi i)(lambda / 2iy + d/dz)
    let two_i_y = BigComplex::new(Float::with_val(PREC, 0), Float::with_val(PREC, &z0.im * 2u32));
    let inner = &(&f(z0).scale_f64(lambda as f64) / &two_i_y) + &dz;
    let two_pi_i = BigComplex::new(Float::with_val(PREC, 0), Float::with_val(PREC, pi * 2u32));
    &inner / &two_pi_i
}

/// `|a - b|` relative to `max(|a|, |b|, scale)`.
fn scaled_err(a: &BigComplex, b: &BigComplex, scale: &Float) -> f64 {
    let d = a.abs().to_f64().max(b.abs().to_f64()).max(scale.to_f64());
    (a - b).abs().to_f64() / d
}

#[test]
fn finite_difference_oracle() {
    let f = e4(60);
    let d1 = delta(4, &f).unwrap();
    let d2 = delta_iter(4, 2, &f).unwrap();
    for (x, y) in [(0.0, 1.0), (0.3, 0.9), (-0.2, 1.4)] {
        let z0 = z(x, y);
        let ev = |w: &BigComplex| f.evaluate(w).unwrap();
        let fd = fd_delta(4, &ev, &z0, 1e-4);
        let exact = d1.evaluate(&z0).unwrap();
        // delta E_4 has weight 6 and vanishes at i; measure against the
        // size of its slices there.
        assert!(scaled_err(&fd, &exact, &d1.magnitude(&z0).unwrap()) < 1e-5);
        if x != 0.0 {
            assert!(fd.rel_diff(&exact) < 1e-5, "{}", fd.rel_diff(&exact));
        }

        let ev1 = |w: &BigComplex| d1.evaluate(w).unwrap();
        let fd2 = fd_delta(6, &ev1, &z0, 1e-4);
        let exact2 = d2.evaluate(&z0).unwrap();
        assert!(fd2.rel_diff(&exact2) < 1e-5, "{}", fd2.rel_diff(&exact2));
    }
    assert!(d1.evaluate(&z(0.0, 1.0)).unwrap().abs().to_f64() < 1e-30);
}

#[test]
fn estar_identity_r0() {
    let rep = verify_estar_relation(8, 0, &z(0.1, 1.0), 128, 100).unwrap();
    assert!(rep.relative_error < 1e-9, "{}", rep.relative_error);
    assert!(verify_estar_relation(6, 1, &z(0.0, 1.0), 32, 10).is_err());
    assert!(verify_estar_relation(5, 1, &z(0.0, 1.0), 128, 10).is_err());
}

#[test]
fn estar_lambda8_r1() {
    // Weight 10 vanishes at i: both sides are ~0 and the error is measured
    // against the slice magnitude.
    let rep = verify_estar_relation(8, 1, &z(0.0, 1.0), 128, 600).unwrap();
    assert!(rep.relative_error < 1e-6, "{rep:?}");
    assert!(rep.scale > 1e-3);
    // Away from i the values are nonzero and the plain relative error applies.
    let rep = verify_estar_relation(8, 1, &z(0.2, 1.1), 128, 300).unwrap();
    let l = BigComplex::new(Float::with_val(128, Float::parse(&rep.lhs[0]).unwrap()), Float::with_val(128, Float::parse(&rep.lhs[1]).unwrap()));
    assert!(l.abs().to_f64() > rep.scale * 1e-3);
    assert!(rep.relative_error < 1e-6, "{rep:?}");
}

#[test]
fn estar_errors_shrink_with_cutoff() {
    let zz = z(1.0 / 3.0, 1.0);
    let errs: Vec<f64> = [25u64, 50, 100, 200]
        .iter()
        .map(|&c| verify_estar_relation(4, 2, &zz, 128, c).unwrap().relative_error)
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[3] < 1e-5, "{errs:?}");
}

#[test]
fn product_with_holomorphic() {
    let f = NearlyHolomorphic::new(4, vec![vec![int(1), int(2), int(0)], vec![int(0), int(1), int(3)]]).unwrap();
    let g = [int(1), int(-1)];
    let p = f.mul_holomorphic(&g, 12).unwrap();
    assert_eq!(p.weight(), 16);
    assert_eq!(p.table(), &[vec![int(1), int(1)], vec![int(0), int(1)]]);
}

fn table_strategy() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1usize..4, 1usize..8).prop_flat_map(|(d, b)| {
        prop::collection::vec(prop::collection::vec((-20i64..20, 1i64..6).prop_map(|(a, c)| rat(a, c)), b), d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_symbolic_oracle(t in table_strategy(), lambda in 1i64..12) {
        let f = NearlyHolomorphic::new(lambda, t.clone()).unwrap();
        let d = delta(lambda, &f).unwrap();
        prop_assert_eq!(d.table(), &symbolic_oracle(lambda, &t)[..]);
    }

    #[test]
    fn linear(a in table_strategy(), b in table_strategy(), x in -5i64..5, y in -5i64..5) {
        let fa = NearlyHolomorphic::new(4, a).unwrap();
        let fb = NearlyHolomorphic::new(4, b).unwrap();
        let lhs = delta(4, &fa.scale(&int(x)).add(&fb.scale(&int(y))).unwrap()).unwrap();
        let rhs = delta(4, &fa).unwrap().scale(&int(x)).add(&delta(4, &fb).unwrap().scale(&int(y))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
