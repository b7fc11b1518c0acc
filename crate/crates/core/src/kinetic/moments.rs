use super::KineticError;

/// Highest velocity-moment order kept.
pub const MAX_ORDER: usize = 6;

/// Local equilibrium parameters: `g = h (λ/π) exp(−λ|u − U|²)`, `λ = 1/(G h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellianState {
    pub h: f64,
    pub u: f64,
    pub v: f64,
    pub lambda: f64,
}

impl MaxwellianState {
    pub fn new(h: f64, u: f64, v: f64, g: f64) -> Self {
        MaxwellianState {
            h,
            u,
            v,
            lambda: 1.0 / (g * h),
        }
    }
}

/// Moments of `g/h` in u (full and half ranges) and in v (full range).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub u: [f64; MAX_ORDER + 1],
    /// Over u > 0.
    pub up: [f64; MAX_ORDER + 1],
    /// Over u < 0.
    pub un: [f64; MAX_ORDER + 1],
    pub v: [f64; MAX_ORDER + 1],
}

fn recur(m: &mut [f64; MAX_ORDER + 1], n: usize, mean: f64, half_var: f64) {
    for k in 0..n.saturating_sub(1) {
        m[k + 2] = mean * m[k + 1] + (k + 1) as f64 * half_var * m[k];
    }
}

/// Moments of the half range that holds the small tail (u < 0 for U > 0 and
/// vice versa), scaled so that order 0 equals `m0`. They are the minimal
/// solution of the moment recurrence, so they are computed downwards from a
/// far start (Miller) in the variable t = √λ u, where the recurrence reads
/// μ_{k+2} = β μ_{k+1} + (k+1)/2 μ_k with β = √λ U.
fn tail_moments(m0: f64, beta: f64, lambda: f64, n: usize) -> [f64; MAX_ORDER + 1] {
    let mut out = [0.0; MAX_ORDER + 1];
    if m0 == 0.0 {
        return out;
    }
    // truncation error ~ exp(−2√(2N)|β|)
    let start = n + 2 + (200.0 / (beta * beta)).ceil() as usize;
    let (mut above, mut here) = (0.0, 1.0);
    let mut mu = [0.0; MAX_ORDER + 1];
    for k in (0..start).rev() {
        let next = (above - beta * here) * 2.0 / (k + 1) as f64;
        above = here;
        here = next;
        if k <= n {
            mu[k] = next;
        }
    }
    let scale = 1.0 / lambda.sqrt();
    let mut f = m0 / mu[0];
    for k in 0..=n {
        out[k] = mu[k] * f;
        f *= scale;
    }
    out
}

/// Normalised moments up to order `n` (at most 6).
pub fn maxwellian_moments(s: &MaxwellianState, n: usize) -> Result<Moments, KineticError> {
    if !(s.lambda > 0.0) || !s.lambda.is_finite() {
        return Err(KineticError::NonPositiveLambda(s.lambda));
    }
    if n > MAX_ORDER {
        return Err(KineticError::OrderTooHigh(n));
    }
    Ok(moments_unchecked(s, n))
}

pub(crate) fn moments_unchecked(s: &MaxwellianState, n: usize) -> Moments {
    let hv = 0.5 / s.lambda;
    let sl = s.lambda.sqrt();
    let gauss = 0.5 * (-s.lambda * s.u * s.u).exp() / (std::f64::consts::PI * s.lambda).sqrt();
    let mut m = Moments {
        u: [0.0; MAX_ORDER + 1],
        up: [0.0; MAX_ORDER + 1],
        un: [0.0; MAX_ORDER + 1],
        v: [0.0; MAX_ORDER + 1],
    };
    m.u[0] = 1.0;
    m.u[1] = s.u;
    m.v[0] = 1.0;
    m.v[1] = s.v;
    m.up[0] = 0.5 * libm::erfc(-sl * s.u);
    m.un[0] = 0.5 * libm::erfc(sl * s.u);
    m.up[1] = s.u * m.up[0] + gauss;
    m.un[1] = s.u * m.un[0] - gauss;
    recur(&mut m.u, n, s.u, hv);
    recur(&mut m.up, n, s.u, hv);
    recur(&mut m.un, n, s.u, hv);
    recur(&mut m.v, n, s.v, hv);
    // upward recurrence loses about log10((2β²)^k / k!) digits on the tail
    let beta = sl * s.u;
    if beta > 2.0 {
        m.un = tail_moments(m.un[0], beta, s.lambda, n);
    } else if beta < -2.0 {
        m.up = tail_moments(m.up[0], beta, s.lambda, n);
    }
    m
}

/// Solves `M x = b` with `M_ij = <ψ_i ψ_j>`, ψ = (1, u, v).
pub fn solve_moment_system(s: &MaxwellianState, b: [f64; 3]) -> [f64; 3] {
    let var = 0.5 / s.lambda;
    let a2 = (b[1] - s.u * b[0]) / var;
    let a3 = (b[2] - s.v * b[0]) / var;
    [b[0] - s.u * a2 - s.v * a3, a2, a3]
}

/// Coefficients `(a1, a2, a3, a4)` of `a = a1 + a2 u + a3 v + a4 (u² + v²)`,
/// the derivative of ln g for a normalised derivative `b = dW / h`. The
/// quadratic term follows from λ = 1/(G h); the rest solves the moment
/// system `<ψ a> = b`.
pub(crate) fn expansion_unchecked(s: &MaxwellianState, b: [f64; 3]) -> [f64; 4] {
    let var = 0.5 / s.lambda;
    let a4 = s.lambda * b[0];
    let (u2, v2) = (s.u * s.u + var, s.v * s.v + var);
    let q0 = u2 + v2;
    let q1 = s.u * (s.u * s.u + 3.0 * var) + s.u * v2;
    let q2 = s.v * u2 + s.v * (s.v * s.v + 3.0 * var);
    let a = solve_moment_system(s, [b[0] - a4 * q0, b[1] - a4 * q1, b[2] - a4 * q2]);
    [a[0], a[1], a[2], a4]
}

/// Expansion coefficients of ln g (see [`expansion_unchecked`]) reproducing
/// the derivative `dw` of the conserved variables: `h <ψ a> = dw`.
pub fn solve_expansion(s: &MaxwellianState, dw: [f64; 3]) -> Result<[f64; 4], KineticError> {
    if !(s.lambda > 0.0) || !(s.h > 0.0) {
        return Err(KineticError::NonPositiveLambda(s.lambda));
    }
    Ok(expansion_unchecked(s, dw.map(|d| d / s.h)))
}
