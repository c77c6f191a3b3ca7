//! Natural cubic spline on a uniform grid, reduced to node weights so that a
//! fixed set of evaluation points costs `O(nodes)` per new set of node values.

/// Uniform grid `t_k = t0 + k h`, `k = 0..n`.
#[derive(Debug, Clone)]
pub(crate) struct UniformGrid {
    pub t0: f64,
    pub h: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn covering(lo: f64, hi: f64, h: f64) -> Self {
        let n = (((hi - lo) / h).ceil() as usize).max(3) + 1;
        UniformGrid { t0: lo, h, n }
    }

    pub fn node(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    /// Interval index and local coordinate in `[0, 1]`.
    fn locate(&self, t: f64) -> (usize, f64) {
        let u = ((t - self.t0) / self.h).clamp(0.0, (self.n - 1) as f64);
        let k = (u.floor() as usize).min(self.n - 2);
        (k, u - k as f64)
    }
}

/// Second derivatives of the natural spline through `y` (Thomas algorithm).
pub(crate) fn second_derivatives(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let inner = n - 2;
    let mut c = vec![0.0; inner];
    let mut d = vec![0.0; inner];
    let scale = 6.0 / (h * h);
    for i in 0..inner {
        let rhs = scale * (y[i + 2] - 2.0 * y[i + 1] + y[i]);
        let denom = if i == 0 { 4.0 } else { 4.0 - c[i - 1] };
        c[i] = 1.0 / denom;
        d[i] = if i == 0 { rhs / denom } else { (rhs - d[i - 1]) / denom };
    }
    for i in (0..inner).rev() {
        m[i + 1] = if i + 1 == inner { d[i] } else { d[i] - c[i] * m[i + 2] };
    }
    m
}

/// Accumulated weights: `Σ_points s(t_i) = Σ_k wy[k] y[k] + wm[k] m[k]`.
#[derive(Debug, Clone)]
pub(crate) struct SumWeights {
    pub grid: UniformGrid,
    pub wy: Vec<f64>,
    pub wm: Vec<f64>,
}

impl SumWeights {
    pub fn new(grid: UniformGrid, points: &[f64]) -> Self {
        let mut wy = vec![0.0; grid.n];
        let mut wm = vec![0.0; grid.n];
        let h2 = grid.h * grid.h / 6.0;
        for &t in points {
            let (k, b) = grid.locate(t);
            let a = 1.0 - b;
            wy[k] += a;
            wy[k + 1] += b;
            wm[k] += (a * a * a - a) * h2;
            wm[k + 1] += (b * b * b - b) * h2;
        }
        SumWeights { grid, wy, wm }
    }

    pub fn total(&self, y: &[f64]) -> f64 {
        let m = second_derivatives(y, self.grid.h);
        self.wy.iter().zip(y).map(|(w, v)| w * v).sum::<f64>() + self.wm.iter().zip(&m).map(|(w, v)| w * v).sum::<f64>()
    }
}
