//! Reduced solution of `A X = B` and the Loewner bound on its norm.

use oblique::douglas::{range_included, reduced_solution};
use oblique::numcore::{from_real, operator_norm};
use oblique::ToleranceProfile;

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let a = from_real(3, 3, &[2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let b = from_real(3, 2, &[1.0, 3.0, 2.0, -1.0, 0.0, 0.0]);
    println!("R(B) in R(A): {}", range_included(&b, &a, &tol)?);

    let sol = reduced_solution(&a, &b, &tol)?;
    println!("D =\n{:.6}", sol.d.map(|z| z.re));
    println!("||A D - B|| = {:.3e}", operator_norm(&(&a * &sol.d - &b)));
    println!("||D||^2 = {:.12}, lambda* = {:.12}", sol.norm_sq, sol.lambda_star);

    let outside = from_real(3, 1, &[0.0, 0.0, 1.0]);
    println!("e3 in R(A): {}", range_included(&outside, &a, &tol)?);
    Ok(())
}
