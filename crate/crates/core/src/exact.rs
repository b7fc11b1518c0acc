//! Exact solution of the 1-D dam-break problem for water initially at rest
//! (Stoker for a wet downstream bed, Ritter for a dry one).

/// Self-similar dam-break solution with the dam at `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stoker {
    g: f64,
    x0: f64,
    /// Upstream (deeper) and downstream depths.
    h_up: f64,
    h_down: f64,
    /// +1 when the deep side is on the left.
    dir: f64,
    hm: f64,
    um: f64,
    shock: f64,
}

impl Stoker {
    pub fn new(hl: f64, hr: f64, g: f64, x0: f64) -> Self {
        let (h_up, h_down, dir) = if hl >= hr {
            (hl, hr, 1.0)
        } else {
            (hr, hl, -1.0)
        };
        let cu = (g * h_up).sqrt();
        let (hm, um, shock) = if h_down <= 0.0 {
            (0.0, 2.0 * cu, 2.0 * cu)
        } else {
            // rarefaction: u = 2(c_up − c); shock into still water:
            // u = (h − h_d) sqrt(g (h + h_d) / (2 h h_d))
            let f = |h: f64| {
                let c = (g * h).sqrt();
                2.0 * (cu - c) - (h - h_down) * (g * (h + h_down) / (2.0 * h * h_down)).sqrt()
            };
            let (mut lo, mut hi) = (h_down, h_up);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 4.0 * f64::EPSILON * hi {
                    break;
                }
            }
            let hm = 0.5 * (lo + hi);
            let um = 2.0 * (cu - (g * hm).sqrt());
            (hm, um, hm * um / (hm - h_down))
        };
        Stoker {
            g,
            x0,
            h_up,
            h_down,
            dir,
            hm,
            um,
            shock,
        }
    }

    /// Depth between rarefaction and shock.
    pub fn middle_depth(&self) -> f64 {
        self.hm
    }

    /// Fluid (contact) speed in the middle state, signed in x.
    pub fn contact_speed(&self) -> f64 {
        self.dir * self.um
    }

    pub fn shock_speed(&self) -> f64 {
        self.dir * self.shock
    }

    /// Depth and velocity at (x, t), t > 0.
    pub fn state(&self, x: f64, t: f64) -> (f64, f64) {
        let xi = self.dir * (x - self.x0) / t;
        let cu = (self.g * self.h_up).sqrt();
        let cm = (self.g * self.hm).sqrt();
        let (h, u) = if xi <= -cu {
            (self.h_up, 0.0)
        } else if xi <= self.um - cm {
            let c = (2.0 * cu - xi) / 3.0;
            (c * c / self.g, 2.0 * (cu + xi) / 3.0)
        } else if xi < self.shock {
            (self.hm, self.um)
        } else {
            (self.h_down, 0.0)
        };
        (h, self.dir * u)
    }

    /// Depth averaged over [a, b] at time t, by composite Simpson quadrature
    /// on each smooth piece.
    pub fn cell_average(&self, a: f64, b: f64, t: f64) -> f64 {
        let cu = (self.g * self.h_up).sqrt();
        let cm = (self.g * self.hm).sqrt();
        let mut breaks: Vec<f64> = [-cu, self.um - cm, self.shock]
            .iter()
            .map(|xi| self.x0 + self.dir * xi * t)
            .filter(|&x| x > a && x < b)
            .collect();
        breaks.sort_by(f64::total_cmp);
        let mut pts = vec![a];
        pts.extend(breaks);
        pts.push(b);
        let mut sum = 0.0;
        for w in pts.windows(2) {
            let (l, r) = (w[0], w[1]);
            let n = 16;
            let hstep = (r - l) / n as f64;
            let mut s = 0.0;
            for k in 0..=n {
                let x = (l + k as f64 * hstep).clamp(l + 1e-14 * (r - l), r - 1e-14 * (r - l));
                let wgt = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                s += wgt * self.state(x, t).0;
            }
            sum += s * hstep / 3.0;
        }
        sum / (b - a)
    }
}
