use super::gamma::ln_gamma;
use crate::error::{invalid, Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const RESCALE: f64 = 1e250;

/// Bessel function of the first kind `J_nu(x)` for real order `nu >= 0` and
/// `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    bessel_j_with_derivative(nu, x).0
}

/// Returns `(J_nu(x), J'_nu(x))`.
///
/// Small arguments (`x < 2` or `x^2/4 < nu + 1`, where the ascending series
/// has no cancellation) use the power series. Otherwise the ratio
/// `J'_nu/J_nu` comes from its continued fraction, the order is recurred down
/// to `mu <~ x`, and the absolute scale is fixed with Steed's complex continued
/// fraction for `(J' + iY')/(J + iY)` together with the Wronskian.
pub fn bessel_j_with_derivative(nu: f64, x: f64) -> (f64, f64) {
    debug_assert!(nu >= 0.0 && x >= 0.0);
    if x == 0.0 {
        return if nu == 0.0 {
            (1.0, 0.0)
        } else if nu == 1.0 {
            (0.0, 0.5)
        } else {
            (0.0, 0.0)
        };
    }
    if x < 2.0 || 0.25 * x * x < nu + 1.0 {
        series(nu, x)
    } else {
        steed(nu, x)
    }
}

fn series(nu: f64, x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = -half * half;
    let log_t0 = nu * half.ln() - ln_gamma(nu + 1.0);
    let mut term = log_t0.exp();
    if term == 0.0 {
        return (0.0, 0.0);
    }
    let mut sum = term;
    let mut dsum = nu * term;
    for k in 1..MAXIT {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        dsum += (2.0 * kf + nu) * term;
        if term.abs() < EPS * sum.abs() && kf * kf > -q {
            break;
        }
    }
    (sum, dsum / x)
}

fn steed(nu: f64, x: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1 for f = J'_nu / J_nu (modified Lentz)
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence to order mu, unnormalised
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE {
            rjl /= RESCALE;
            rjpl /= RESCALE;
            rjl1 /= RESCALE;
            rjp1 /= RESCALE;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    // CF2 (Steed) for p + iq at order mu
    let mut a = 0.25 - mu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    let scale = rjmu / rjl;
    (rjl1 * scale, rjp1 * scale)
}

fn check_order(order: f64) -> Result<()> {
    if !order.is_finite() {
        return invalid(format!("Bessel order must be finite, got {order}"));
    }
    if order < 0.0 {
        return invalid(format!("Bessel order must be nonnegative, got {order}"));
    }
    Ok(())
}

/// Scan step for bracketing zeros. Consecutive zeros of `J_nu` are more than
/// 3 apart for every `nu >= 0`, so no bracket can hold two of them.
const SCAN_STEP: f64 = 1.0;

/// Refines a sign-change bracket of `J_nu` to full precision with
/// Newton steps safeguarded by bisection.
fn refine_zero(nu: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = bessel_j(nu, lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (j, dj) = bessel_j_with_derivative(nu, x);
        if j == 0.0 {
            return x;
        }
        if (j > 0.0) == (f_lo > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - j / dj;
        let next = if dj != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x || hi - lo <= 2.0 * f64::EPSILON * hi {
            return next;
        }
        x = next;
    }
    x
}

struct ZeroScan {
    nu: f64,
    x: f64,
    value: f64,
}

impl ZeroScan {
    fn new(nu: f64) -> Self {
        // j_{nu,1} > nu for every nu >= 0
        let x = nu.max(1e-3);
        Self { nu, x, value: bessel_j(nu, x) }
    }

    fn next_zero(&mut self) -> f64 {
        loop {
            let x1 = self.x + SCAN_STEP;
            let v1 = bessel_j(self.nu, x1);
            if v1 == 0.0 {
                self.x = x1;
                self.value = bessel_j(self.nu, x1 + 1e-9 * x1);
                return x1;
            }
            if (v1 > 0.0) != (self.value > 0.0) {
                let z = refine_zero(self.nu, self.x, x1);
                self.x = x1;
                self.value = v1;
                return z;
            }
            self.x = x1;
            self.value = v1;
        }
    }
}

/// The first `count` positive zeros of `J_order`, ascending.
pub fn bessel_order_zeros(order: f64, count: usize) -> Result<Vec<f64>> {
    check_order(order)?;
    if count == 0 {
        return invalid("zero count must be at least 1");
    }
    let mut scan = ZeroScan::new(order);
    Ok((0..count).map(|_| scan.next_zero()).collect())
}

/// All positive zeros of `J_order` that do not exceed `x_max`, ascending.
pub fn bessel_zeros_below(order: f64, x_max: f64) -> Result<Vec<f64>> {
    check_order(order)?;
    if !x_max.is_finite() {
        return Err(Error::InvalidArgument(format!("upper bound must be finite, got {x_max}")));
    }
    let mut out = Vec::new();
    if x_max <= order {
        return Ok(out);
    }
    let mut scan = ZeroScan::new(order);
    loop {
        let z = scan.next_zero();
        if z > x_max {
            break;
        }
        out.push(z);
    }
    Ok(out)
}
