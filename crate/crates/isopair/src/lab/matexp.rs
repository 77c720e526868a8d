//! Matrix exponential by scaling and squaring with Pade approximants
//! (degrees 3/5/7/9/13 chosen from the 1-norm), for dense complex
//! matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::LabError;

type CMat = DMatrix<Complex64>;

/// Max column sum of absolute values.
pub fn one_norm(a: &CMat) -> f64 {
    let mut best = 0.0f64;
    for c in 0..a.ncols() {
        let s: f64 = (0..a.nrows()).map(|r| a[(r, c)].norm()).sum();
        best = best.max(s);
    }
    best
}

pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius norm of the leading window x window block.
pub fn window_norm(a: &CMat, window: usize) -> f64 {
    let w = window.min(a.nrows()).min(a.ncols());
    let mut s = 0.0;
    for r in 0..w {
        for c in 0..w {
            s += a[(r, c)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Squared-entry sum over the row band [from, to).
pub fn band_norm_sq(a: &CMat, from: usize, to: usize) -> f64 {
    let mut s = 0.0;
    for r in from..to.min(a.nrows()) {
        for c in 0..a.ncols() {
            s += a[(r, c)].norm_sqr();
        }
    }
    s
}

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] =
    [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pade numerator pair (U, V) for odd degrees up to 9 using the even
/// power table [I, A2, A4, ...].
fn pade_small(a: &CMat, powers: &[CMat], b: &[f64]) -> (CMat, CMat) {
    let n = a.nrows();
    let mut u = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    for (k, pw) in powers.iter().enumerate() {
        u += pw * re(b[2 * k + 1]);
        v += pw * re(b[2 * k]);
    }
    (a * u, v)
}

/// exp(A) with backward error near machine precision for well-scaled
/// inputs; errors only on non-finite entries.
pub fn expm(a: &CMat) -> Result<CMat, LabError> {
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LabError::NonFiniteInput);
    }
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix expected");
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(LabError::NonFiniteInput);
    }
    let id = CMat::identity(n, n);
    let a2 = a * a;

    let (u, v) = if norm <= THETA_3 {
        pade_small(a, &[id.clone(), a2.clone()], &B3)
    } else if norm <= THETA_5 {
        let a4 = &a2 * &a2;
        pade_small(a, &[id.clone(), a2.clone(), a4], &B5)
    } else if norm <= THETA_7 {
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        pade_small(a, &[id.clone(), a2.clone(), a4, a6], &B7)
    } else if norm <= THETA_9 {
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let a8 = &a6 * &a2;
        pade_small(a, &[id.clone(), a2.clone(), a4, a6, a8], &B9)
    } else {
        // scale so the norm drops under theta_13, then square back
        let s = ((norm / THETA_13).log2().ceil()).max(0.0) as u32;
        let scale = re(0.5f64.powi(s as i32));
        let a_s = a * scale;
        let a2 = &a_s * &a_s;
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let b = &B13;
        let u_hi = &a6 * (&a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]));
        let u_lo = &a6 * re(b[7]) + &a4 * re(b[5]) + &a2 * re(b[3]) + &id * re(b[1]);
        let u = &a_s * (u_hi + u_lo);
        let v_hi = &a6 * (&a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]));
        let v = v_hi + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + &id * re(b[0]);
        let mut x = solve_pade(&u, &v)?;
        for _ in 0..s {
            x = &x * &x;
        }
        return Ok(x);
    };
    solve_pade(&u, &v)
}

fn solve_pade(u: &CMat, v: &CMat) -> Result<CMat, LabError> {
    let lhs = v - u;
    let rhs = v + u;
    let lu = lhs.lu();
    lu.solve(&rhs).ok_or(LabError::SingularPadeSolve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_expm(a: &CMat, terms: usize) -> CMat {
        let n = a.nrows();
        let mut acc = CMat::identity(n, n);
        let mut term = CMat::identity(n, n);
        for k in 1..=terms {
            term = &term * a * re(1.0 / k as f64);
            acc += &term;
        }
        acc
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMat::zeros(5, 5);
        let e = expm(&z).unwrap();
        assert!(frobenius_norm(&(&e - CMat::identity(5, 5))) < 1e-15);
    }

    #[test]
    fn diagonal_exponential() {
        let mut d = CMat::zeros(3, 3);
        d[(0, 0)] = Complex64::new(1.0, 0.0);
        d[(1, 1)] = Complex64::new(-0.5, 2.0);
        d[(2, 2)] = Complex64::new(0.0, -1.0);
        let e = expm(&d).unwrap();
        for i in 0..3 {
            let want = d[(i, i)].exp();
            assert!((e[(i, i)] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn matches_taylor_for_moderate_norms() {
        // deterministic pseudo-random complex matrices, ||M|| <= 5, N <= 8
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [2usize, 4, 8] {
            let mut m = CMat::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] = Complex64::new(next(), next());
                }
            }
            let scale = 4.0 / one_norm(&m).max(1e-12);
            let m = &m * re(scale);
            let e = expm(&m).unwrap();
            let t = taylor_expm(&m, 60);
            assert!(frobenius_norm(&(&e - &t)) <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn nilpotent_exponential_is_finite_taylor() {
        // strictly sub-diagonal: exponential equals the finite Taylor sum
        let n = 6;
        let mut m = CMat::zeros(n, n);
        for r in 1..n {
            m[(r, r - 1)] = re(1.5 * r as f64);
        }
        let e = expm(&m).unwrap();
        let t = taylor_expm(&m, n);
        assert!(frobenius_norm(&(&e - &t)) <= 1e-12 * frobenius_norm(&t));
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = Complex64::new(f64::INFINITY, 0.0);
        assert!(matches!(expm(&m), Err(LabError::NonFiniteInput)));
    }

    #[test]
    fn semigroup_property_small() {
        let mut m = CMat::zeros(4, 4);
        for r in 0..4 {
            for c in 0..4 {
                m[(r, c)] = Complex64::new(0.1 * (r as f64 - c as f64), 0.05);
            }
        }
        let e1 = expm(&(&m * re(0.3))).unwrap();
        let e2 = expm(&(&m * re(0.7))).unwrap();
        let e = expm(&m).unwrap();
        assert!(frobenius_norm(&(&e1 * &e2 - &e)) < 1e-13);
    }
}
