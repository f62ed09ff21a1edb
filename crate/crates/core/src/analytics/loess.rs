//! Tricube-weighted local linear smoothing.

/// Smoothed value at each x. Each fit uses the nearest `ceil(span * n)`
/// points (at least two); with span above 1 the neighborhood radius is
/// stretched by `span`, as is conventional.
pub fn loess(xs: &[f64], ys: &[f64], span: f64) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return ys.to_vec();
    }
    let q = ((span * n as f64).ceil() as usize).clamp(2, n);
    xs.iter()
        .map(|&x0| local_fit(xs, ys, x0, q, span))
        .collect()
}

fn local_fit(xs: &[f64], ys: &[f64], x0: f64, q: usize, span: f64) -> f64 {
    let mut d: Vec<f64> = xs.iter().map(|x| (x - x0).abs()).collect();
    d.sort_by(f64::total_cmp);
    let mut radius = d[q - 1];
    if span > 1.0 {
        radius *= span;
    }
    // a point exactly on the radius would get weight 0; nudge so the q
    // nearest all count
    radius = radius.max(f64::MIN_POSITIVE) * (1.0 + 1e-9);
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let u = (x - x0).abs() / radius;
        if u >= 1.0 {
            continue;
        }
        let w = (1.0 - u.powi(3)).powi(3);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let mx = sx / sw;
    let my = sy / sw;
    let var = sxx / sw - mx * mx;
    if var.abs() < 1e-12 * (1.0 + mx * mx) {
        return my;
    }
    let slope = (sxy / sw - mx * my) / var;
    my + slope * (x0 - mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_series_is_reproduced() {
        let xs: Vec<f64> = (0..14).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.58 + 0.018 * x).collect();
        for span in [0.3, 0.75, 1.0, 2.0] {
            for (a, b) in loess(&xs, &ys, span).iter().zip(&ys) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn constant_stays_constant() {
        let xs = [0.0, 1.0, 2.0, 5.0];
        assert!(loess(&xs, &[3.0; 4], 0.75)
            .iter()
            .all(|v| (v - 3.0).abs() < 1e-12));
    }

    #[test]
    fn smooths_a_spike() {
        let xs: Vec<f64> = (0..20).map(f64::from).collect();
        let mut ys = vec![0.0; 20];
        ys[10] = 10.0;
        let s = loess(&xs, &ys, 0.75);
        assert!(s[10] < 5.0 && s[10] > 0.0);
    }
}
