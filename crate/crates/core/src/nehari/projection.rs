use crate::energy::Evaluation;
use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::ModelParams;
use crate::nehari::NehariState;

/// Unique `t > 0` with `a + b t² − c t^{p−2} = 0`.
///
/// For `p > 4`, `a, c > 0` and `b ≥ 0` the function is positive at 0 and
/// eventually negative with a single sign change. A geometric bracket is
/// grown first, then refined by Newton steps that fall back to bisection
/// whenever they leave the bracket.
pub fn nehari_scale(a: f64, b: f64, c: f64, p: f64) -> Result<f64> {
    if !(a > 0.0 && c > 0.0 && b >= 0.0 && p > 4.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(SbppError::Bracket(format!(
            "need a > 0, b >= 0, c > 0, p > 4 (got a={a:e}, b={b:e}, c={c:e}, p={p})"
        )));
    }
    let f = |t: f64| a + b * t * t - c * t.powf(p - 2.0);
    let df = |t: f64| 2.0 * b * t - (p - 2.0) * c * t.powf(p - 3.0);

    let mut lo = 1.0;
    let mut hi = 1.0;
    let mut grow = 0;
    if f(1.0) > 0.0 {
        while f(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            grow += 1;
            if grow > 2000 {
                return Err(SbppError::Bracket("no sign change above t = 1".into()));
            }
        }
    } else {
        while f(lo) <= 0.0 {
            hi = lo;
            lo *= 0.5;
            grow += 1;
            if grow > 2000 {
                return Err(SbppError::Bracket("no sign change below t = 1".into()));
            }
        }
    }

    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let ft = f(t);
        if ft > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let scale = a + b * t * t + c * t.powf(p - 2.0);
        if ft.abs() <= 4.0 * f64::EPSILON * scale || hi - lo <= 2.0 * f64::EPSILON * hi {
            return Ok(t);
        }
        let d = df(t);
        let newton = if d != 0.0 { t - ft / d } else { f64::NAN };
        t = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(t)
}

/// Scales `u` onto the Nehari manifold and certifies the residual.
pub fn project_to_nehari(u: &ScalarField, params: &ModelParams) -> Result<NehariState> {
    u.validate()?;
    if !u.has_positive_part() {
        return Err(SbppError::NoPositivePart);
    }
    let ev = Evaluation::new(u.clone(), params);
    let (projected, t) = project_evaluation(&ev, params)?;
    Ok(NehariState::from_evaluation(projected, t, params))
}

/// Projection of an evaluated field, reusing `φ(tu) = t²φ(u)`.
pub(crate) fn project_evaluation(ev: &Evaluation, params: &ModelParams) -> Result<(Evaluation, f64)> {
    let e = ev.energy;
    if e.power <= 0.0 {
        return Err(SbppError::NoPositivePart);
    }
    let t = nehari_scale(e.kinetic_mass, e.coupling, e.power, params.p)?;
    Ok((ev.scaled(t, params), t))
}
