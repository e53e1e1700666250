use horolab_lie::Sl2;

pub use horolab_lie::xi;

/// Paper value of the lower curvature constant.
pub const CINEMATIC_LOWER: f64 = 1.0 / 3.0;
/// Sharp upper curvature constant on `y1 in [0, 1]`, attained at
/// `x1 = x2`, `y1 = 1`. The printed value 3 is too small.
pub const CINEMATIC_UPPER: f64 = 6.0;

/// `Ad(u_r) w` for `w` in `r`.
pub fn ad_u(w: &Sl2, r: f64) -> Sl2 {
    let a = w.a + r * w.c;
    Sl2::new(a, xi(w, r), w.c)
}

/// `|det(w - w')|`, the tangency of `Xi(w)` and `Xi(w')`.
pub fn tangency(w: &Sl2, wp: &Sl2) -> f64 {
    (*w - *wp).det().abs()
}

/// Fraction of `e` whose tube `Xi^b(w)` contains `q`.
///
/// Panics unless `q.0` lies in `[0, 1]`, where the tubes are defined.
pub fn multiplicity(e: &[Sl2], q: (f64, f64), b: f64) -> f64 {
    assert!((0.0..=1.0).contains(&q.0), "q1 = {} outside [0, 1]", q.0);
    if e.is_empty() {
        return 0.0;
    }
    let hits = e.iter().filter(|w| (q.1 - xi(w, q.0)).abs() <= b).count();
    hits as f64 / e.len() as f64
}

/// Diameter of `Xi^delta(w) ∩ Xi^delta(w')`, rasterized in `q1` at step
/// `delta / 4`. Each column contributes the overlap of the two vertical
/// intervals; `None` when the tubes do not meet on the raster.
pub fn tube_intersection_diameter(w: &Sl2, wp: &Sl2, delta: f64) -> Option<f64> {
    assert!(delta > 0.0);
    let step = delta / 4.0;
    let n = (1.0 / step).ceil() as usize;
    let mut cols: Vec<(f64, f64, f64)> = Vec::new();
    for k in 0..=n {
        let q1 = (k as f64 * step).min(1.0);
        let (y, yp) = (xi(w, q1), xi(wp, q1));
        let lo = (y - delta).max(yp - delta);
        let hi = (y + delta).min(yp + delta);
        if lo <= hi {
            cols.push((q1, lo, hi));
        }
    }
    if cols.is_empty() {
        return None;
    }
    let mut d2: f64 = 0.0;
    for (i, a) in cols.iter().enumerate() {
        d2 = d2.max((a.2 - a.1).powi(2));
        for b in &cols[i + 1..] {
            let dx = (b.0 - a.0).powi(2);
            let dy = (b.2 - a.1).abs().max((b.1 - a.2).abs());
            d2 = d2.max(dx + dy * dy);
        }
    }
    Some(d2.sqrt())
}

/// `Phi(x, y) = y2 + 2 x1 y1 + x2 y1^2`; `Xi(w)` is the level set
/// `Phi((w11, w21), y) = w12` over `y1 in [0, 1]`.
pub fn phi(x: [f64; 2], y: [f64; 2]) -> f64 {
    y[1] + 2.0 * x[0] * y[0] + x[1] * y[0] * y[0]
}

/// `|d Phi / d y1| + |d^2 Phi / d y1^2|`.
pub fn cinematic_sum(x: [f64; 2], y1: f64) -> f64 {
    (2.0 * x[0] + 2.0 * x[1] * y1).abs() + (2.0 * x[1]).abs()
}
