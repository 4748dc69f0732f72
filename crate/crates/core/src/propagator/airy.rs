//! Airy function and the oscillatory cubic-phase integral it resums.

use num_complex::Complex;

type C64 = Complex<f64>;

const AI0: f64 = 0.3550280538878172; // 3^(−2/3)/Γ(2/3)
const AIP0: f64 = -0.2588194037928068; // −3^(−1/3)/Γ(1/3)

/// Ai(x) for real argument: Maclaurin series in the central window and the
/// standard asymptotic expansions outside it.
pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= 5.2 {
        airy_series(x)
    } else if x > 0.0 {
        airy_asymptotic_pos(x)
    } else {
        airy_asymptotic_neg(-x)
    }
}

fn airy_series(x: f64) -> f64 {
    // Ai = c1 f − c2 g with f = Σ x^{3k}·Πᵢ(3i+1)/ (3k)!, g similar
    let x3 = x * x * x;
    let mut f_term = 1.0f64;
    let mut g_term = x;
    let mut f = f_term;
    let mut g = g_term;
    for k in 0..60 {
        let kk = k as f64;
        f_term *= x3 / ((3.0 * kk + 2.0) * (3.0 * kk + 3.0));
        g_term *= x3 / ((3.0 * kk + 3.0) * (3.0 * kk + 4.0));
        f += f_term;
        g += g_term;
        if f_term.abs() < 1e-18 && g_term.abs() < 1e-18 {
            break;
        }
    }
    AI0 * f + AIP0 * g
}

fn asymptotic_coeffs(n: usize) -> Vec<f64> {
    // c_k = Γ(3k+1/2) / (54^k k! Γ(k+1/2)); c_1 = 5/72
    let mut c = vec![1.0f64];
    for k in 1..=n {
        let kf = k as f64;
        let prev = c[k - 1];
        c.push(
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / (216.0 * kf * (2.0 * kf - 1.0)),
        );
    }
    c
}

fn airy_asymptotic_pos(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let pref = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25));
    let c = asymptotic_coeffs(8);
    let mut sum = 0.0;
    let mut sign = 1.0;
    for (k, ck) in c.iter().enumerate() {
        let term = ck / zeta.powi(k as i32);
        if k > 0 && term.abs() > c[k - 1] / zeta.powi(k as i32 - 1) {
            break; // series started diverging
        }
        sum += sign * term;
        sign = -sign;
    }
    pref * sum
}

fn airy_asymptotic_neg(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let pref = 1.0 / (std::f64::consts::PI.sqrt() * x.powf(0.25));
    let c = asymptotic_coeffs(8);
    let arg = zeta + std::f64::consts::FRAC_PI_4;
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut sign = 1.0;
    for k in 0..4 {
        even += sign * c[2 * k] / zeta.powi(2 * k as i32);
        odd += sign * c[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
        sign = -sign;
    }
    pref * (arg.sin() * even - arg.cos() * odd)
}

/// Closed form of I(u) = ∫ dk e^{(i/ħ)(u·k + a·k³/12)} for a > 0.
///
/// Substituting a k³/(12ħ) = s³/3, i.e. k = s·(4ħ/a)^{1/3}, turns the phase
/// into s³/3 + s·u(4/(aħ²))^{1/3} and the integral into 2π·Ai of that
/// argument times the substitution scale.
pub fn cubic_phase_integral_closed(u: f64, a: f64, hbar: f64) -> f64 {
    assert!(a > 0.0, "closed form derived for positive cubic coefficient");
    let scale = (4.0 * hbar / a).powf(1.0 / 3.0);
    let arg = u * (4.0 / (a * hbar * hbar)).powf(1.0 / 3.0);
    scale * 2.0 * std::f64::consts::PI * airy_ai(arg)
}

/// The same integral by damped-contour quadrature: a Gaussian damper e^{−εk²}
/// makes the trapezoid sum converge, and Richardson extrapolation removes the
/// damping. Deterministic and independent of the Airy reduction above.
pub fn cubic_phase_integral_quadrature(u: f64, a: f64, hbar: f64) -> f64 {
    let levels = 5;
    // the ε expansion runs in powers of ε·k*² with k* the cubic scale, so
    // the base damping must shrink with it
    let k_star = (4.0 * hbar / a).powf(1.0 / 3.0);
    let eps0 = 0.12 / (k_star * k_star);
    let mut vals = Vec::with_capacity(levels);
    for lvl in 0..levels {
        let eps = eps0 / (2.0f64).powi(lvl as i32);
        vals.push(damped_integral(u, a, hbar, eps));
    }
    // Richardson in ε: successively cancel the leading power
    let mut table = vals;
    let mut factor = 2.0;
    while table.len() > 1 {
        let mut next = Vec::with_capacity(table.len() - 1);
        for i in 0..table.len() - 1 {
            next.push((factor * table[i + 1] - table[i]) / (factor - 1.0));
        }
        table = next;
        factor *= 2.0;
    }
    table[0].re
}

fn damped_integral(u: f64, a: f64, hbar: f64, eps: f64) -> C64 {
    // range where the damper has decayed to ~1e−14
    let k_max = (32.0f64 / eps).sqrt();
    // resolve the fastest local phase u k/ħ + a k³/(12ħ)
    let max_rate = (u.abs() + a * k_max * k_max / 4.0) / hbar + 2.0 * eps * k_max;
    let dk = (std::f64::consts::PI / max_rate / 6.0).min(0.05);
    let n = (2.0 * k_max / dk).ceil() as usize + 1;
    let dk = 2.0 * k_max / (n - 1) as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        let k = -k_max + dk * i as f64;
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        let phase = (u * k + a * k * k * k / 12.0) / hbar;
        acc += C64::new(phase.cos(), phase.sin()) * (-eps * k * k).exp() * w;
    }
    acc * dk
}
