//! The shorted operator through its three routes, and its extremal properties.

use oblique::numcore::from_real;
use oblique::shorted::{compare_routes, infimum_report, is_admissible, shifted_short, DEFAULT_SAMPLES};
use oblique::{HermitianMatrix, Subspace, ToleranceProfile};

fn main() -> oblique::Result<()> {
    let tol = ToleranceProfile::default();
    let a = HermitianMatrix::psd(
        from_real(3, 3, &[2.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 3.0]),
        &tol,
    )?;
    let s = Subspace::from_spanning(&from_real(3, 1, &[1.0, 0.0, 0.0]), &tol)?;

    let routes = compare_routes(&a, &s, &tol)?;
    println!("Σ =\n{:.6}", routes.block.sigma.matrix().map(|z| z.re));
    println!("largest route disagreement {:.3e}", routes.max_residual());
    println!("R(Σ) = R(A) ∩ S^⊥: {}", routes.range_identity);
    println!("S admissible: {}", is_admissible(&a, &s, &tol)?);

    let inf = infimum_report(&a, &s, 7, DEFAULT_SAMPLES, &tol)?;
    println!(
        "infimum attained {} (residual {:.3e}), dominated by {} samples: {}",
        inf.attained, inf.attainment_residual, inf.samples, inf.dominated
    );

    let shifted = shifted_short(&a, &s, 0.5, &tol)?;
    println!("Σ(P, A + 0.5 (I - P)) =\n{:.6}", shifted.matrix().map(|z| z.re));
    Ok(())
}
