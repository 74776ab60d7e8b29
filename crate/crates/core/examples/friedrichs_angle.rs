//! Friedrichs angle between two lines, and the secant law for `||P_{Q,P}||`.

use oblique::subspace::friedrichs_cos;
use oblique::twoproj::{line_projection, p_qp};
use oblique::ToleranceProfile;

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let axis = line_projection(0.0, &tol);
    println!(
        "{:>8} {:>14} {:>14} {:>16}",
        "theta", "cos", "||P_(Q,P)||", "norm * cos"
    );
    for k in 1..8 {
        let theta = k as f64 * std::f64::consts::FRAC_PI_2 / 8.0;
        let line = line_projection(theta, &tol);
        let cos = friedrichs_cos(line.range(), axis.range())?;
        let norm = p_qp(&line, &axis, &tol)?.norm();
        println!(
            "{theta:>8.4} {cos:>14.10} {norm:>14.10} {:>16.13}",
            norm * theta.cos()
        );
    }
    Ok(())
}
