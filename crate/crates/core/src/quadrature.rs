//! Adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! A 15-point Kronrod rule (embedded 7-point Gauss rule) supplies both a
//! segment estimate and an error estimate; the segment with the largest
//! error is bisected until the global error meets tolerance. Integrands
//! with known kinks should be integrated via [`integrate_with_splits`] so
//! every segment stays smooth.

use crate::error::{Error, Result};

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
/// Odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_SEGMENTS: usize = 2048;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    /// Integral estimate.
    pub value: f64,
    /// Absolute error estimate.
    pub error: f64,
    /// Number of segments in the final partition.
    pub segments: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One 15-point Kronrod evaluation over [a, b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);

    let fc = f(center);
    let mut resg = WG[3] * fc;
    let mut resk = WGK[7] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = half_len * XGK[jtw];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let fsum = f1 + f2;
        resg += WG[j] * fsum;
        resk += WGK[jtw] * fsum;
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }

    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = half_len * XGK[jtwm1];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }

    let value = resk * half_len;
    resabs *= half_len.abs();
    resasc *= half_len.abs();

    let mut err = ((resk - resg) * half_len).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (1.0f64).min((200.0 * err / resasc).powf(1.5));
    }
    let tiny_floor = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if resabs > tiny_floor {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

/// Adaptive integral of `f` over [a, b]. Supports a > b (sign flip).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, segments: 0 });
    }
    if a > b {
        let flipped = integrate(f, b, a, rel_tol, abs_tol)?;
        return Ok(QuadResult { value: -flipped.value, ..flipped });
    }

    let (v0, e0) = gk15(&f, a, b);
    let mut segs = vec![Segment { a, b, value: v0, error: e0 }];

    loop {
        let total_val = pairwise_segment_values(&segs);
        let total_err: f64 = segs.iter().map(|s| s.error).sum();
        if !total_val.is_finite() {
            return Err(Error::QuadratureFailure(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if total_err <= abs_tol.max(rel_tol * total_val.abs()) {
            return Ok(QuadResult { value: total_val, error: total_err, segments: segs.len() });
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureFailure(format!(
                "tolerance not reached on [{a}, {b}] after {MAX_SEGMENTS} segments \
                 (error estimate {total_err:.3e})"
            )));
        }

        let worst = segs
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(i, _)| i)
            .expect("non-empty segment list");
        let Segment { a: sa, b: sb, .. } = segs[worst];
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            // Interval no longer bisectable in f64; accept what we have.
            return Ok(QuadResult { value: total_val, error: total_err, segments: segs.len() });
        }
        let (lv, le) = gk15(&f, sa, mid);
        let (rv, re) = gk15(&f, mid, sb);
        segs[worst] = Segment { a: sa, b: mid, value: lv, error: le };
        segs.push(Segment { a: mid, b: sb, value: rv, error: re });
    }
}

/// Integral over [points[0], points.last()] split at every interior point,
/// so each sub-interval sees a smooth integrand. Points must be ascending.
pub fn integrate_with_splits<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    if points.len() < 2 {
        return Err(Error::QuadratureFailure(
            "integrate_with_splits needs at least two boundary points".into(),
        ));
    }
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::QuadratureFailure(
            "split points must be in ascending order".into(),
        ));
    }
    let per_piece_abs = abs_tol / (points.len() - 1) as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut segments = 0;
    for w in points.windows(2) {
        let piece = integrate(&f, w[0], w[1], rel_tol, per_piece_abs)?;
        value += piece.value;
        error += piece.error;
        segments += piece.segments;
    }
    Ok(QuadResult { value, error, segments })
}

fn pairwise_segment_values(segs: &[Segment]) -> f64 {
    if segs.len() <= 8 {
        return segs.iter().map(|s| s.value).sum();
    }
    let (lo, hi) = segs.split_at(segs.len() / 2);
    pairwise_segment_values(lo) + pairwise_segment_values(hi)
}
