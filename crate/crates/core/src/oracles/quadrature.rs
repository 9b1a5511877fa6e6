//! Adaptive Gauss-Kronrod integration.

use super::OracleError;
use crate::abstraction::Density;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 60;

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integral of `f` over `[a, b]` to absolute tolerance `tol`, by recursive
/// bisection of 15-point Kronrod panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, OracleError> {
    if b <= a {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol, 0usize)];
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (v, err) = kronrod(&f, lo, hi);
        if err <= t || hi - lo <= f64::EPSILON * (lo.abs() + hi.abs()) {
            total += v;
        } else if depth >= MAX_DEPTH {
            return Err(OracleError::Quadrature { a: lo, b: hi, err });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * t, depth + 1));
            stack.push((mid, hi, 0.5 * t, depth + 1));
        }
    }
    Ok(total)
}

/// Mass of the density shifted by `s` over `[a, b]`, integrated from the pdf.
/// The integration range is cut at the support ends and the mode.
pub fn quadrature_mass(dist: &dyn Density, a: f64, b: f64, s: f64) -> Result<f64, OracleError> {
    let (lo, hi) = dist.support();
    if dist.is_point_mass() {
        let x = lo + s;
        return Ok(if a <= x && x <= b { 1.0 } else { 0.0 });
    }
    let from = a.max(lo + s);
    let to = b.min(hi + s);
    if to <= from {
        return Ok(0.0);
    }
    let mode = dist.mode() + s;
    let mut cuts = vec![from];
    if from < mode && mode < to {
        cuts.push(mode);
    }
    cuts.push(to);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(|x| dist.pdf(x - s), w[0], w[1], 1e-10 / 2.0)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{Triangular, TruncatedGaussian};

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
        let v = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn masses() {
        let g = TruncatedGaussian::new(-0.3, 0.1, -0.4, -0.2).unwrap();
        assert!((quadrature_mass(&g, -1.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((quadrature_mass(&g, -1.0, -0.3, 0.0).unwrap() - 0.5).abs() < 1e-10);
        let t = Triangular::new(0.0, 1.0).unwrap();
        assert!((quadrature_mass(&t, 0.0, 5.0, 0.0).unwrap() - 0.5).abs() < 1e-10);
        let x = quadrature_mass(&t, -0.2, 0.7, 0.1).unwrap();
        assert!((x - (t.cdf(0.6) - t.cdf(-0.3))).abs() < 1e-10);
    }
}
