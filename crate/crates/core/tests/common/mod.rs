//! Shared oracles and builders for the integration and acceptance tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use stamr_swe::kinetic::{maxwellian_moments, solve_expansion, MaxwellianState};
use stamr_swe::mesh::{BaseMesh, BoundaryTag, QuadForest, RectMesh};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
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
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod estimate, error estimate and the Kronrod estimate of `∫|f|`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut m = WGK[7] * fc.abs();
    for i in 0..7 {
        let (f1, f2) = (f(c - r * XGK[i]), f(c + r * XGK[i]));
        k += WGK[i] * (f1 + f2);
        m += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    (k * r, (k - g).abs() * r, m * r.abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature by bisection. A panel is also
/// accepted once its error estimate reaches round-off of `∫|f|` over it.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (k, err, mass) = gk15(f, a, b);
        if err <= tol || err <= 1e-14 * mass || depth > 30 {
            return k;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, abs_tol, 0)
}

/// Quadrature moments of the normalised 1-D Maxwellian
/// `sqrt(λ/π) exp(−λ(u−U)²)`: (full, u > 0, u < 0) for orders 0..=n.
pub fn maxwell_moments_1d(mean: f64, lambda: f64, n: usize) -> [Vec<f64>; 3] {
    let s = 1.0 / lambda.sqrt();
    let lo = mean - 40.0 * s;
    let hi = mean + 40.0 * s;
    let norm = (lambda / std::f64::consts::PI).sqrt();
    let mut out = [vec![0.0; n + 1], vec![0.0; n + 1], vec![0.0; n + 1]];
    for k in 0..=n {
        let f = move |u: f64| norm * u.powi(k as i32) * (-lambda * (u - mean) * (u - mean)).exp();
        // each half to relative accuracy: coarse pass sets the tolerance
        let half = |a: f64, b: f64| {
            let rough = integrate(&f, a, b, 1e-6 * (mean.abs() + s).powi(k as i32));
            integrate(&f, a, b, 1e-14 * rough.abs().max(1e-300))
        };
        let neg = if lo < 0.0 {
            half(lo, 0.0_f64.min(hi))
        } else {
            0.0
        };
        let pos = if hi > 0.0 {
            half(0.0_f64.max(lo), hi)
        } else {
            0.0
        };
        out[0][k] = neg + pos;
        out[1][k] = pos;
        out[2][k] = neg;
    }
    out
}

/// Absolute-value moment `<|u|^k>` by quadrature.
pub fn abs_moment(mean: f64, lambda: f64, k: usize) -> f64 {
    let s = 1.0 / lambda.sqrt();
    let norm = (lambda / std::f64::consts::PI).sqrt();
    let f = move |u: f64| norm * u.abs().powi(k as i32) * (-lambda * (u - mean) * (u - mean)).exp();
    let tol = 1e-14 * (mean.abs() + 0.5 * s).powi(k as i32);
    let (lo, hi) = (mean - 40.0 * s, mean + 40.0 * s);
    if lo < 0.0 && hi > 0.0 {
        integrate(&f, lo, 0.0, tol) + integrate(&f, 0.0, hi, tol)
    } else {
        integrate(&f, lo, hi, tol)
    }
}

/// Directional derivative of `ln g` for `g = h (λ/π) exp(−λ|u−U|²)`,
/// `λ = 1/(G h)`, along `dw = (dh, d(hU), d(hV))`, as coefficients of
/// `1, u, v, u²+v²`.
pub fn ln_g_derivative(h: f64, u: f64, v: f64, g: f64, dw: [f64; 3]) -> [f64; 4] {
    let lambda = 1.0 / (g * h);
    let dh = dw[0];
    let du = (dw[1] - u * dh) / h;
    let dv = (dw[2] - v * dh) / h;
    let dl = -lambda * dh / h;
    // dh/h + dλ/λ − dλ|c−U|² + 2λ(c−U)·dU, expanded in c = (u, v)
    let c0 = dh / h + dl / lambda - dl * (u * u + v * v) - 2.0 * lambda * (u * du + v * dv);
    let cu = 2.0 * dl * u + 2.0 * lambda * du;
    let cv = 2.0 * dl * v + 2.0 * lambda * dv;
    [c0, cu, cv, -dl]
}

pub fn rect(x: [f64; 2], y: [f64; 2], n: [usize; 2], tag: BoundaryTag) -> RectMesh {
    RectMesh {
        x0: x[0],
        x1: x[1],
        y0: y[0],
        y1: y[1],
        nx: n[0],
        ny: n[1],
        left: tag,
        right: tag,
        bottom: tag,
        top: tag,
        periodic_x: false,
    }
}

/// Base mesh with randomly perturbed interior nodes (still convex quads).
pub fn jittered_base(rng: &mut impl Rng, nx: usize, ny: usize, jitter: f64) -> BaseMesh {
    let r = rect([0.0, 1.0], [0.0, 1.0], [nx, ny], BoundaryTag::Wall);
    let base = BaseMesh::rectangle(&r).unwrap();
    let (dx, dy) = (1.0 / nx as f64, 1.0 / ny as f64);
    let nodes: Vec<[f64; 2]> = base
        .nodes()
        .iter()
        .map(|p| {
            let interior = p[0] > 1e-12 && p[0] < 1.0 - 1e-12 && p[1] > 1e-12 && p[1] < 1.0 - 1e-12;
            if interior {
                [
                    p[0] + jitter * dx * rng.gen_range(-1.0..1.0),
                    p[1] + jitter * dy * rng.gen_range(-1.0..1.0),
                ]
            } else {
                *p
            }
        })
        .collect();
    let quads = base.quads().to_vec();
    let mut text = format!("{}\n", nodes.len());
    for p in &nodes {
        text.push_str(&format!("{} {}\n", p[0], p[1]));
    }
    text.push_str(&format!("{}\n", quads.len()));
    for (q, c) in quads.iter().enumerate() {
        let tags: Vec<&str> = (0..4)
            .map(|e| {
                let a = base.nodes()[c[e]];
                let b = base.nodes()[c[(e + 1) % 4]];
                let on = |t: fn(f64, f64) -> bool| t(a[0], a[1]) && t(b[0], b[1]);
                if on(|x, _| x.abs() < 1e-12)
                    || on(|x, _| (x - 1.0).abs() < 1e-12)
                    || on(|_, y| y.abs() < 1e-12)
                    || on(|_, y| (y - 1.0).abs() < 1e-12)
                {
                    "wall"
                } else {
                    "-"
                }
            })
            .collect();
        let _ = q;
        text.push_str(&format!(
            "{} {} {} {} {}\n",
            c[0],
            c[1],
            c[2],
            c[3],
            tags.join(" ")
        ));
    }
    BaseMesh::from_text(&text).unwrap()
}

/// Forest refined by `rounds` passes of random marks, kept 2:1 balanced.
pub fn random_forest(rng: &mut impl Rng, base: BaseMesh, l_max: u8, rounds: usize) -> QuadForest {
    let mut f = QuadForest::new(Arc::new(base), l_max).unwrap();
    for _ in 0..rounds {
        let marks: Vec<bool> = (0..f.len()).map(|_| rng.gen_bool(0.3)).collect();
        f.refine(&marks).unwrap();
        f.enforce_balance().unwrap();
    }
    f
}

fn rel(x: f64, oracle: f64, floor: f64) -> f64 {
    (x - oracle).abs() / oracle.abs().max(floor)
}

/// Largest relative deviation of the closed-form moments from quadrature.
/// Half-range moments that underflow are compared against 1e-12 of the
/// absolute moment of the same order.
pub fn moment_error(h: f64, u: f64, v: f64, g: f64) -> f64 {
    let s = MaxwellianState::new(h, u, v, g);
    let m = maxwellian_moments(&s, 6).unwrap();
    let [fu, pu, nu] = maxwell_moments_1d(u, s.lambda, 6);
    let [fv, _, _] = maxwell_moments_1d(v, s.lambda, 6);
    let mut e: f64 = 0.0;
    for k in 0..=6 {
        let floor_u = 1e-12 * abs_moment(u, s.lambda, k);
        let floor_v = 1e-12 * abs_moment(v, s.lambda, k);
        e = e.max(rel(m.u[k], fu[k], floor_u));
        e = e.max(rel(m.up[k], pu[k], floor_u));
        e = e.max(rel(m.un[k], nu[k], floor_u));
        e = e.max(rel(m.v[k], fv[k], floor_v));
    }
    e
}

/// Relative error of the slope expansion for the increment `dw`: its
/// coefficients against the derivative of ln g, and `h <ψ a>` against `dw`
/// with quadrature moments.
pub fn expansion_error(h: f64, u: f64, v: f64, g: f64, dw: [f64; 3]) -> f64 {
    let s = MaxwellianState::new(h, u, v, g);
    let a = solve_expansion(&s, dw).unwrap();
    let d = ln_g_derivative(h, u, v, g, dw);
    let scale = d.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let mut e: f64 = 0.0;
    for i in 0..4 {
        e = e.max((a[i] - d[i]).abs() / scale);
    }
    let [mu, _, _] = maxwell_moments_1d(u, s.lambda, 3);
    let [mv, _, _] = maxwell_moments_1d(v, s.lambda, 3);
    let m = [
        a[0] + a[1] * mu[1] + a[2] * mv[1] + a[3] * (mu[2] + mv[2]),
        a[0] * mu[1] + a[1] * mu[2] + a[2] * mu[1] * mv[1] + a[3] * (mu[3] + mu[1] * mv[2]),
        a[0] * mv[1] + a[1] * mu[1] * mv[1] + a[2] * mv[2] + a[3] * (mu[2] * mv[1] + mv[3]),
    ];
    let dscale = dw.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    for i in 0..3 {
        e = e.max((h * m[i] - dw[i]).abs() / dscale);
    }
    e
}
