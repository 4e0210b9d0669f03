//! Bessel functions of the first kind of integer order and their positive
//! real zeros.
//!
//! `J_n(z)` is evaluated with the ascending power series for small arguments
//! and with Miller's downward recurrence, normalized through
//! `J_0 + 2 Σ J_2k = 1`, everywhere else. Upward recurrence is never used:
//! it is unstable as soon as the order exceeds the argument.

use std::f64::consts::FRAC_PI_4;

use crate::error::{domain, Error, Result};

/// Below this argument the ascending series is summed directly. The largest
/// term then never exceeds the result by more than a factor of a few, so no
/// digits are lost to cancellation.
const SERIES_MAX_ARG: f64 = 1.0;

/// Rescaling threshold for the unnormalized downward recurrence.
const BIG: f64 = 1e250;
const BIG_INV: f64 = 1e-250;

/// A Bessel order reduced to `ell >= 0`, together with the sign picked up by
/// `J_{-ell}(z) = (-1)^ell J_ell(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BesselOrder {
    pub ell: u32,
    negated: bool,
}

impl BesselOrder {
    pub fn reduce(order: i32) -> Self {
        let ell = order.unsigned_abs();
        Self {
            ell,
            negated: order < 0 && ell % 2 == 1,
        }
    }

    fn sign(self) -> f64 {
        if self.negated {
            -1.0
        } else {
            1.0
        }
    }
}

/// `J_order(z)` for any integer order and finite real `z`.
pub fn bessel_j(order: i32, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return domain(format!("bessel_j: argument must be finite, got {z}"));
    }
    let ord = BesselOrder::reduce(order);
    let n = ord.ell;
    // J_n(-z) = (-1)^n J_n(z)
    let reflect = if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    Ok(ord.sign() * reflect * jn_nonneg(n, z.abs()))
}

fn jn_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < SERIES_MAX_ARG {
        series(n, x)
    } else {
        miller(n, x)
    }
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= q / (m * (m + n as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        m += 1.0;
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let mut start = (top + 20.0 + (40.0 * top).sqrt()).ceil() as u32;
    start += start % 2;

    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k, unnormalized
    let mut norm = 0.0;
    let mut result = if start == n { cur } else { 0.0 };
    let two_over_x = 2.0 / x;

    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds J_{k-1}
        let idx = k - 1;
        if idx == n {
            result = cur;
        }
        if idx % 2 == 0 {
            norm += if idx == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > BIG {
            cur *= BIG_INV;
            next *= BIG_INV;
            norm *= BIG_INV;
            result *= BIG_INV;
        }
    }
    result / norm
}

/// The `index`-th positive zero of `J_order` (`index >= 1`).
///
/// Zeros are bracketed by a scan with step pi/4 starting from the lower bound
/// `j_{n,1} > n`, then bisected down to adjacent floating point numbers.
pub fn bessel_zero(order: i32, index: u32) -> Result<f64> {
    if order < 0 {
        return domain(format!("bessel_zero: order must be >= 0, got {order}"));
    }
    if index == 0 {
        return domain("bessel_zero: index must be >= 1");
    }
    let n = order as u32;
    let lo = if n == 0 { 0.5 } else { n as f64 };
    let hi = lo + (index as f64 + 8.0) * std::f64::consts::PI + 20.0;
    let j = |z: f64| jn_nonneg(n, z);

    let mut found = 0;
    let mut a = lo;
    let mut fa = j(a);
    let mut step = 1u32;
    loop {
        let b = lo + step as f64 * FRAC_PI_4;
        if b > hi {
            return Err(Error::Bracket {
                order: n,
                index,
                lo,
                hi,
            });
        }
        let fb = j(b);
        if fb == 0.0 {
            found += 1;
            if found == index {
                return Ok(b);
            }
            // step past the exact zero so the next bracket starts cleanly
            step += 1;
            a = lo + step as f64 * FRAC_PI_4;
            fa = j(a);
            step += 1;
            continue;
        }
        if fa.signum() != fb.signum() {
            found += 1;
            if found == index {
                return Ok(bisect(&j, a, b, fa));
            }
        }
        a = b;
        fa = fb;
        step += 1;
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Double-double arithmetic: just enough for a compensated ascending
    /// series that is independent of the production code path.
    #[derive(Clone, Copy, Debug)]
    struct Dd(f64, f64);

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd(s, err)
    }

    impl Dd {
        fn add(self, o: Dd) -> Dd {
            let s = two_sum(self.0, o.0);
            let t = two_sum(self.1, o.1);
            let hi = two_sum(s.0, s.1 + t.0);
            two_sum(hi.0, hi.1 + t.1)
        }
        fn mul(self, o: Dd) -> Dd {
            let p = self.0 * o.0;
            let e = self.0.mul_add(o.0, -p);
            two_sum(p, e + self.0 * o.1 + self.1 * o.0)
        }
        fn div_f(self, d: f64) -> Dd {
            let q1 = self.0 / d;
            let r = self.add(Dd(-q1 * d, -q1.mul_add(d, -(q1 * d))));
            let q2 = r.0 / d;
            two_sum(q1, q2)
        }
    }

    /// Ascending series summed in double-double; valid to ~1e-16 absolute
    /// for |z| up to ~30.
    fn series_oracle(n: u32, z: f64) -> f64 {
        let half = Dd(0.5 * z, 0.0);
        let mut term = Dd(1.0, 0.0);
        for i in 1..=n {
            term = term.mul(half).div_f(i as f64);
        }
        let q = half.mul(half);
        let mut sum = term;
        for m in 1..400u32 {
            term = term.mul(q).div_f((m * (m + n)) as f64);
            term = Dd(-term.0, -term.1);
            sum = sum.add(term);
            if term.0.abs() < 1e-40 {
                break;
            }
        }
        sum.0 + sum.1
    }

    /// Trapezoid rule on the periodic integral representation
    /// J_n(z) = (1/2pi) ∫ cos(n t - z sin t) dt; exponentially convergent.
    fn integral_oracle(n: i32, z: f64) -> f64 {
        let m = 2 * ((z.abs() as usize) + n.unsigned_abs() as usize) + 128;
        let h = 2.0 * PI / m as f64;
        (0..m)
            .map(|i| {
                let t = i as f64 * h;
                (n as f64 * t - z * t.sin()).cos()
            })
            .sum::<f64>()
            / m as f64
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_argument_is_domain_error() {
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(2, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn j2_of_4_matches_series_oracle() {
        let oracle = series_oracle(2, 4.0);
        let got = bessel_j(2, 4.0).unwrap();
        assert!((got - oracle).abs() <= 1e-12, "{got} vs {oracle}");
        // mpmath besselj(2, 4)
        assert!((oracle - 0.364_128_145_852_072_8).abs() < 1e-15);
    }

    #[test]
    fn matches_series_oracle_small_arguments() {
        for n in 0..=50u32 {
            for i in 0..=120 {
                let z = 0.25 * i as f64;
                let want = series_oracle(n, z);
                let got = bessel_j(n as i32, z).unwrap();
                assert!((got - want).abs() <= 1e-12, "J_{n}({z}) = {got}, oracle {want}");
            }
        }
    }

    #[test]
    fn matches_integral_oracle_over_envelope() {
        let mut worst: f64 = 0.0;
        for n in [0, 1, 2, 3, 5, 10, 17, 30, 49, 50] {
            for i in 0..=400 {
                let z = 0.5 * i as f64 + 0.013 * n as f64;
                if z > 200.0 {
                    continue;
                }
                let want = integral_oracle(n, z);
                let got = bessel_j(n, z).unwrap();
                worst = worst.max((got - want).abs());
                assert!((got - want).abs() <= 1e-12, "J_{n}({z}) = {got}, oracle {want}");
            }
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn frozen_high_precision_values() {
        // mpmath.besselj at 30 digits
        let cases = [
            (0, 200.0, -0.015_437_439_930_565_09),
            (50, 200.0, 0.015_693_898_978_573_08),
            (50, 10.0, 1.784_513_607_871_595e-30),
            (17, 33.3, -0.101_550_403_933_235_72),
            (3, 150.25, 0.062_774_016_081_290_15),
        ];
        for (n, z, want) in cases {
            let got = bessel_j(n, z).unwrap();
            assert!((got - want).abs() < 1e-12, "J_{n}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn parity_in_order_and_argument() {
        for n in -12i32..=12 {
            for z in [0.3, 1.7, 4.0, 13.2, 77.7] {
                let plus = bessel_j(n.abs(), z).unwrap();
                let minus = bessel_j(-n.abs(), z).unwrap();
                let sign = if n.abs() % 2 == 1 { -1.0 } else { 1.0 };
                assert_eq!(minus, sign * plus);
                assert_eq!(bessel_j(n.abs(), -z).unwrap(), sign * plus);
            }
        }
    }

    #[test]
    fn large_argument_asymptotics() {
        for ell in 0..=1i32 {
            let start = 20.0 * ell as f64 + 20.0;
            for i in 0..50 {
                let z = start + 3.1 * i as f64;
                let asym = (2.0 / (PI * z)).sqrt() * (z - (2 * ell + 1) as f64 * FRAC_PI_4).cos();
                let got = bessel_j(ell, z).unwrap();
                assert!((got - asym).abs() <= 0.05 / z, "ell={ell} z={z}");
            }
        }
    }

    #[test]
    fn large_argument_asymptotics_with_correction() {
        // leading Hankel term plus the first 1/z correction; the remainder
        // is O(ℓ⁴ z^{-5/2})
        for ell in 2..=5i32 {
            let mu = 4.0 * (ell * ell) as f64;
            let start = 20.0 * ell as f64 + 20.0;
            for i in 0..50 {
                let z = start + 3.1 * i as f64;
                let chi = z - (2 * ell + 1) as f64 * FRAC_PI_4;
                let asym = (2.0 / (PI * z)).sqrt() * (chi.cos() - (mu - 1.0) / (8.0 * z) * chi.sin());
                let got = bessel_j(ell, z).unwrap();
                assert!((got - asym).abs() <= 0.05 / z, "ell={ell} z={z}");
            }
        }
    }

    fn bracket_oracle(n: u32, lo: f64, hi: f64) -> f64 {
        let (mut a, mut b) = (lo, hi);
        let fa = series_oracle(n, a);
        assert!(fa.signum() != series_oracle(n, b).signum());
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if series_oracle(n, m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn first_zero_of_j0() {
        let z = bessel_zero(0, 1).unwrap();
        let oracle = bracket_oracle(0, 2.0, 3.0);
        assert!((z - oracle).abs() < 1e-6);
        assert!((z - 2.404_826).abs() < 1e-6);
    }

    #[test]
    fn first_two_zeros_of_j2() {
        let z1 = bessel_zero(2, 1).unwrap();
        let z2 = bessel_zero(2, 2).unwrap();
        assert!((z1 - bracket_oracle(2, 5.0, 5.5)).abs() < 1e-12);
        assert!((z2 - bracket_oracle(2, 8.0, 8.7)).abs() < 1e-12);
        for z in [z1, z2] {
            assert!(bessel_j(2, z).unwrap().abs() < 1e-11);
            assert!(series_oracle(2, z).abs() < 1e-11);
        }
    }

    #[test]
    fn zero_spacing_approaches_pi() {
        let zs: Vec<f64> = (1..=21).map(|i| bessel_zero(2, i).unwrap()).collect();
        for i in 10..=20 {
            let gap = zs[i] - zs[i - 1];
            assert!((gap - PI).abs() < 0.01, "gap {i}: {gap}");
        }
    }

    #[test]
    fn zeros_interlace_and_have_small_residuals() {
        for ell in 0..=8 {
            for i in 1..=15 {
                let a = bessel_zero(ell, i).unwrap();
                let b = bessel_zero(ell + 1, i).unwrap();
                let c = bessel_zero(ell, i + 1).unwrap();
                assert!(a < b && b < c, "ell={ell} i={i}: {a} {b} {c}");
                assert!(bessel_j(ell, a).unwrap().abs() <= 1e-11);
            }
        }
    }

    #[test]
    fn zero_argument_errors() {
        assert!(matches!(bessel_zero(-1, 1), Err(Error::Domain(_))));
        assert!(matches!(bessel_zero(2, 0), Err(Error::Domain(_))));
    }
}
