use rug::Float;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// three-term recurrence, at `prec` bits.
pub fn gauss_legendre(n: usize, prec: u32) -> Vec<(Float, Float)> {
    assert!(n >= 1);
    let work = prec + 32;
    let eps = Float::with_val(work, Float::i_exp(1, -(prec as i32)));
    let pi = Float::with_val(work, rug::float::Constant::Pi);
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = Float::with_val(work, &pi * ((i as f64 - 0.25) / (n as f64 + 0.5)));
        let mut x = guess.cos();
        let mut dp = Float::with_val(work, 1);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            dp = d;
            let dx = Float::with_val(work, &p / &dp);
            x -= &dx;
            if dx.abs() < eps {
                break;
            }
        }
        let (_, d) = legendre(n, &x);
        dp = if d.is_zero() { dp } else { d };
        let one_minus = Float::with_val(work, 1) - Float::with_val(work, &x * &x);
        let w = Float::with_val(work, 2) / (one_minus * Float::with_val(work, &dp * &dp));
        out.push((Float::with_val(prec, &x), Float::with_val(prec, &w)));
    }
    out.reverse();
    out
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(prec, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(prec, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = std::mem::replace(&mut p1, p2);
    }
    if n == 0 {
        return (Float::with_val(prec, 1), Float::with_val(prec, 0));
    }
    let x2m1 = Float::with_val(prec, x * x) - 1u32;
    let d = (Float::with_val(prec, x * &p1) - &p0) * n as u32 / x2m1;
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 40] {
            let nodes = gauss_legendre(n, 128);
            for deg in 0..(2 * n) {
                let s: Float = nodes.iter().fold(Float::with_val(128, 0), |acc, (x, w)| {
                    acc + Float::with_val(128, w * Float::with_val(128, x.pow(deg as u32)))
                });
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((s.to_f64() - exact).abs() < 1e-25, "n={n} deg={deg}: {s}");
            }
        }
    }

    #[test]
    fn integrates_exp() {
        let nodes = gauss_legendre(30, 200);
        let s = nodes.iter().fold(Float::with_val(200, 0), |acc, (x, w)| acc + Float::with_val(200, w * x.clone().exp()));
        let e = Float::with_val(200, 1).exp();
        let exact = Float::with_val(200, &e - e.clone().recip());
        assert!(Float::with_val(200, s - exact).abs() < Float::with_val(200, Float::i_exp(1, -180)));
    }
}
