use super::*;
use crate::exactarith::rational::{self, int, rat};
use crate::exactarith::divisor_sum;
use proptest::prelude::*;
use rug::Float;

fn series(c: &[i64]) -> FourierExpansion {
    FourierExpansion::from_q_series(&c.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
}

fn g4(bound: usize) -> FourierExpansion {
    let mut c = vec![rat(1, 120)];
    for n in 1..=bound as u64 {
        c.push(Rational::from(divisor_sum(n, 3).unwrap() * 2));
    }
    FourierExpansion::from_q_series(&c).unwrap()
}

/// `q prod (1 - q^n)^24` by repeated multiplication of dense polynomials.
fn delta_oracle(bound: usize) -> Vec<i64> {
    let mut p = vec![0i64; bound + 1];
    if bound >= 1 {
        p[1] = 1;
    }
    for n in 1..=bound {
        for _ in 0..24 {
            for k in (n..=bound).rev() {
                p[k] -= p[k - n];
            }
        }
    }
    p
}

fn gaussian_lattice() -> HermLattice {
    HermLattice::integral_hermitian(QuadField::gaussian(), 2)
}

fn brute_force_psd(l: &HermLattice, t: &Rational) -> Vec<HermIndex> {
    let b = coordinate_box_bound(l, t).unwrap();
    let m = l.rank();
    let mut out = Vec::new();
    let traces: Vec<f64> = l.basis().iter().map(|x| rational::to_f64(&x.trace().a)).collect();
    let tf = rational::to_f64(t) + 1e-9;
    let mut c = vec![-b; m];
    loop {
        let approx: f64 = c.iter().zip(&traces).map(|(&x, y)| x as f64 * y).sum();
        let h = (approx <= tf && approx >= -1e-9).then(|| HermIndex::new(l.combine(&c)));
        if let Some(h) = h.filter(|h| h.trace() <= t && h.is_psd()) {
            out.push(h);
        }
        let mut i = 0;
        loop {
            if i == m {
                out.sort();
                return out;
            }
            c[i] += 1;
            if c[i] <= b {
                break;
            }
            c[i] = -b;
            i += 1;
        }
    }
}

#[test]
fn dual_of_scaled_z() {
    let z = HermLattice::classical();
    assert!(dual_lattice(&z).unwrap().same_lattice(&z));
    let five = HermLattice::classical_scaled(int(5)).unwrap();
    let expect = HermLattice::classical_scaled(rat(1, 5)).unwrap();
    assert!(dual_lattice(&five).unwrap().same_lattice(&expect));
}

#[test]
fn double_dual_is_identity() {
    for d in [1u64, 2, 3, 7] {
        for n in 1..=3 {
            let m = HermLattice::integral_hermitian(QuadField::new(d).unwrap(), n);
            let dd = dual_lattice(&dual_lattice(&m).unwrap()).unwrap();
            assert!(dd.same_lattice(&m), "d={d} n={n}");
            assert_eq!(dd.basis(), m.basis());
        }
    }
}

#[test]
fn gaussian_dual_has_half_off_diagonals() {
    let m = gaussian_lattice();
    let dual = dual_lattice(&m).unwrap();
    let k = QuadField::gaussian();
    let mut h = KMatrix::zeros(k, 2, 2);
    h[(0, 1)] = k.elem(rat(1, 2), int(0));
    h[(1, 0)] = k.elem(rat(1, 2), int(0));
    assert!(dual.contains(&h));
    assert!(!m.contains(&h));
}

#[test]
fn degenerate_lattice_rejected() {
    let k = QuadField::gaussian();
    let basis = vec![KMatrix::identity(k, 2)];
    let l = HermLattice::new(k, 2, basis).unwrap();
    assert!(matches!(dual_lattice(&l), Err(Error::Degenerate(_))));
    let dup = HermLattice::new(k, 1, vec![KMatrix::identity(k, 1), KMatrix::identity(k, 1)]);
    assert!(dup.is_err());
}

#[test]
fn psd_enumeration_examples() {
    let z = HermLattice::classical();
    let traces: Vec<Rational> = enumerate_psd(&z, &int(3)).unwrap().iter().map(|h| h.trace().clone()).collect();
    assert_eq!(traces, vec![int(0), int(1), int(2), int(3)]);
    let zero = enumerate_psd(&gaussian_lattice(), &int(0)).unwrap();
    assert_eq!(zero.len(), 1);
    assert!(zero[0].is_zero());

    let k = QuadField::gaussian();
    let got = enumerate_psd(&gaussian_lattice(), &int(1)).unwrap();
    let expect: Vec<HermIndex> = [[0, 0], [0, 1], [1, 0]]
        .iter()
        .map(|d| HermIndex::new(KMatrix::diagonal(k, &[k.int(d[0]), k.int(d[1])])))
        .collect();
    assert_eq!(got, expect);
    assert!(enumerate_psd(&z, &int(-1)).is_err());
}

#[test]
fn psd_enumeration_matches_box_search() {
    let mut lattices = vec![HermLattice::classical(), HermLattice::classical_scaled(rat(1, 3)).unwrap()];
    for d in [1u64, 2, 3] {
        let m = HermLattice::integral_hermitian(QuadField::new(d).unwrap(), 2);
        lattices.push(dual_lattice(&m).unwrap());
        lattices.push(m);
    }
    for l in &lattices {
        for t in [int(0), rat(1, 2), int(1), int(2), rat(5, 2), int(4)] {
            let fast = enumerate_psd(l, &t).unwrap();
            let slow = brute_force_psd(l, &t);
            assert_eq!(fast, slow, "T = {t}");
            assert!(fast.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn multiply_examples() {
    let f = series(&[1, 1, 1]);
    assert_eq!(f.multiply(&f).unwrap().to_q_series().unwrap(), vec![int(1), int(2), int(3)]);
    let one = series(&[1, 0, 0, 0, 0]);
    let g = g4(4);
    assert_eq!(one.multiply(&g).unwrap().to_q_series().unwrap(), g.to_q_series().unwrap());

    let other = FourierExpansion::zero(gaussian_lattice(), int(2)).unwrap();
    assert_eq!(f.multiply(&other).unwrap_err(), Error::LatticeMismatch);
}

#[test]
fn multiply_in_rank_four() {
    let dual = dual_lattice(&gaussian_lattice()).unwrap();
    let bound = int(3);
    let idx = enumerate_psd(&dual, &bound).unwrap();
    let mut f = FourierExpansion::zero(dual.clone(), bound.clone()).unwrap();
    let mut g = FourierExpansion::zero(dual, bound).unwrap();
    for (i, h) in idx.iter().enumerate() {
        f.insert(h.matrix().clone(), Coeff::Rational(int(i as i64 + 1))).unwrap();
        g.insert(h.matrix().clone(), Coeff::Rational(rat(1, i as i64 + 2))).unwrap();
    }
    let fg = f.multiply(&g).unwrap();
    assert_eq!(fg.to_json(), g.multiply(&f).unwrap().to_json());
    // (f g)(0) = f(0) g(0).
    let zero = KMatrix::zeros(QuadField::gaussian(), 2, 2);
    assert_eq!(fg.coeff(&zero), Some(&Coeff::Rational(rat(1, 2))));
    let three = f.multiply(&g).unwrap().multiply(&f).unwrap();
    let three2 = f.multiply(&g.multiply(&f).unwrap()).unwrap();
    assert_eq!(three.to_json(), three2.to_json());
}

#[test]
fn support_checks() {
    let g = g4(10);
    assert!(g.check_support(SupportMode::Holomorphic));
    assert!(!g.check_support(SupportMode::Cusp));
    let delta: Vec<i64> = delta_oracle(20);
    let d = series(&delta);
    assert!(d.check_support(SupportMode::Cusp));
    let z = FourierExpansion::zero(gaussian_lattice(), int(3)).unwrap();
    assert!(z.check_support(SupportMode::Holomorphic) && z.check_support(SupportMode::Cusp));

    let k = QuadField::gaussian();
    let mut f = FourierExpansion::zero(gaussian_lattice(), int(3)).unwrap();
    f.insert(KMatrix::diagonal(k, &[k.int(1), k.int(0)]), Coeff::Rational(int(1))).unwrap();
    assert!(f.check_support(SupportMode::Holomorphic));
    assert!(!f.check_support(SupportMode::Cusp));
    f.insert(KMatrix::diagonal(k, &[k.int(1), k.int(0)]), Coeff::Rational(int(0))).unwrap();
    f.insert(KMatrix::diagonal(k, &[k.int(1), k.int(2)]), Coeff::Rational(int(1))).unwrap();
    assert!(f.check_support(SupportMode::Cusp));
}

#[test]
fn insert_rejects_bad_indices() {
    let k = QuadField::gaussian();
    let mut f = FourierExpansion::zero(gaussian_lattice(), int(3)).unwrap();
    let neg = KMatrix::diagonal(k, &[k.int(2), k.int(-1)]);
    assert!(f.insert(neg, Coeff::Rational(int(1))).is_err());
    let big = KMatrix::diagonal(k, &[k.int(2), k.int(2)]);
    assert!(f.insert(big, Coeff::Rational(int(1))).is_err());
    let half = KMatrix::diagonal(k, &[k.from_rational(rat(1, 2)), k.int(0)]);
    assert!(f.insert(half, Coeff::Rational(int(1))).is_err());
}

#[test]
fn coefficient_rings() {
    let g = g4(30);
    assert_eq!(g.detect_coefficient_ring(), CoefficientRing::Localized(120.into()));
    let scaled = g.scale(&Coeff::Rational(int(240)));
    assert_eq!(scaled.detect_coefficient_ring(), CoefficientRing::Integers);
    assert_eq!(series(&delta_oracle(30)).detect_coefficient_ring(), CoefficientRing::Integers);

    let k = QuadField::new(3).unwrap();
    let mut f = series(&[1, 2]);
    let root = Coeff::Field(k.root());
    f = f.scale(&root);
    assert_eq!(f.detect_coefficient_ring(), CoefficientRing::QuadraticField(3));

    let huge = FourierExpansion::from_q_series(&[rat(1, 1_000_000_007), rat(1, 1_000_000_009)]).unwrap();
    assert_eq!(huge.detect_coefficient_ring(), CoefficientRing::Rationals);
}

#[test]
fn numeric_coefficients_reconstruct_or_flag() {
    let exact = g4(5);
    let numeric = exact.scale(&Coeff::Numeric(BigComplex::one(128)));
    assert_eq!(numeric.detect_coefficient_ring(), CoefficientRing::Localized(120.into()));

    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(7);
    for _ in 0..20 {
        let x: f64 = rand::Rng::gen(&mut rng);
        let mut f = FourierExpansion::zero(HermLattice::classical(), int(1)).unwrap();
        let z = BigComplex::from_real(Float::with_val(128, x) * Float::with_val(128, 3).sqrt());
        let k = QuadField::gaussian();
        f.insert(KMatrix::diagonal(k, &[k.int(1)]), Coeff::Numeric(z)).unwrap();
        assert_eq!(f.detect_coefficient_ring(), CoefficientRing::Numeric);
    }
}

#[test]
fn json_round_trip() {
    let g = g4(12);
    let j = serde_json::to_string(&g.to_json()).unwrap();
    assert!(j.contains("\"schema\":1") && j.contains("\"1/120\""));
    let back = FourierExpansion::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back.to_q_series().unwrap(), g.to_q_series().unwrap());

    let dual = dual_lattice(&gaussian_lattice()).unwrap();
    let k = QuadField::gaussian();
    let mut f = FourierExpansion::zero(dual, int(2)).unwrap();
    for (i, h) in enumerate_psd(f.lattice(), &int(2)).unwrap().into_iter().enumerate() {
        let c = match i % 3 {
            0 => Coeff::Rational(rat(i as i64, 7)),
            1 => Coeff::Field(k.elem(int(1), rat(i as i64, 3))),
            _ => Coeff::Numeric(BigComplex::from_f64(96, 0.1 * i as f64, -1.5)),
        };
        f.insert(h.matrix().clone(), c).unwrap();
    }
    let back = FourierExpansion::from_json(&f.to_json()).unwrap();
    assert_eq!(back.to_json(), f.to_json());
    let mut bad = f.to_json();
    bad.schema = 2;
    assert!(FourierExpansion::from_json(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_series_round_trip(c in prop::collection::vec((-50i64..50, 1i64..20), 1..30)) {
        let v: Vec<Rational> = c.iter().map(|&(a, b)| rat(a, b)).collect();
        let f = FourierExpansion::from_q_series(&v).unwrap();
        prop_assert_eq!(f.to_q_series().unwrap(), v);
    }

    #[test]
    fn multiply_commutes_and_associates(
        a in prop::collection::vec(-9i64..9, 1..12),
        b in prop::collection::vec(-9i64..9, 1..12),
        c in prop::collection::vec(-9i64..9, 1..12),
    ) {
        let (f, g, h) = (series(&a), series(&b), series(&c));
        prop_assert_eq!(f.multiply(&g).unwrap().to_q_series().unwrap(), g.multiply(&f).unwrap().to_q_series().unwrap());
        let l = f.multiply(&g).unwrap().multiply(&h).unwrap();
        let r = f.multiply(&g.multiply(&h).unwrap()).unwrap();
        prop_assert_eq!(l.to_q_series().unwrap(), r.to_q_series().unwrap());
    }
}
