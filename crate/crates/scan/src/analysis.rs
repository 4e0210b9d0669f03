//! Post-processing of sweep data: least-squares lines, correlation and
//! one-sided slope statistics around a kink.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample mean and standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let m = mean(xs);
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, var.sqrt())
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    LinearFit {
        slope,
        intercept,
        r2: 1.0 - ss_res / ss_tot,
    }
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

/// Slope statistics on either side of a suspected kink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkContrast {
    pub left_mean: f64,
    pub left_std: f64,
    pub right_mean: f64,
    pub right_std: f64,
}

impl KinkContrast {
    /// `|right_mean - left_mean| / max(left_std, right_std)`.
    pub fn ratio(&self) -> f64 {
        (self.right_mean - self.left_mean).abs() / self.left_std.max(self.right_std)
    }
}

/// Compare first-derivative samples `(x, dy/dx)` whose distance from `x0`
/// lies in `[inner, outer]`, left against right.
pub fn kink_contrast(derivative: &[(f64, f64)], x0: f64, inner: f64, outer: f64) -> KinkContrast {
    let side = |sign: f64| -> Vec<f64> {
        derivative
            .iter()
            .filter(|(x, _)| {
                let d = sign * (x - x0);
                d >= inner && d <= outer
            })
            .map(|p| p.1)
            .collect()
    };
    let (left_mean, left_std) = mean_std(&side(-1.0));
    let (right_mean, right_std) = mean_std(&side(1.0));
    KinkContrast {
        left_mean,
        left_std,
        right_mean,
        right_std,
    }
}
