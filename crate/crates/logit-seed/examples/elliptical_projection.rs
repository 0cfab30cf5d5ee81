//! Project a sampled weight row onto the ellipsoid `sum_i d_i w_i^2 = pi/2`
//! — the constraint that gives the neuron its entropy-optimal logit variance
//! — and show the Lagrange-multiplier solution, its residual, and the
//! isotropic special case where the projection is a pure rescaling.

use logit_seed::{elliptical_project, ProjectionProblem};

fn main() -> logit_seed::Result<()> {
    // Anisotropic input second moments d_i = E[x_i^2]: the ellipse axes.
    let w_tilde = vec![0.9, -1.4, 0.3, 2.0];
    let d = vec![0.5, 2.0, 1.0, 0.25];
    let problem = ProjectionProblem::new(w_tilde.clone(), d.clone(), ProjectionProblem::DEFAULT_TARGET)?;
    let proj = elliptical_project(&problem)?;

    let quad: f64 = proj.w.iter().zip(&d).map(|(w, di)| w * w * di).sum();
    let dist: f64 = proj
        .w
        .iter()
        .zip(&w_tilde)
        .map(|(w, t)| (w - t).powi(2))
        .sum::<f64>()
        .sqrt();
    println!("draw     w~ = {w_tilde:?}");
    println!("moments  d  = {d:?}");
    println!("projected w = {:?}", proj.w);
    println!("multiplier lambda = {:.6}", proj.multiplier);
    println!(
        "constraint sum d_i w_i^2 = {quad:.12} (target {:.12}), residual {:.2e}",
        ProjectionProblem::DEFAULT_TARGET,
        (quad - ProjectionProblem::DEFAULT_TARGET).abs()
    );
    println!("distance moved ||w - w~||_2 = {dist:.6}");

    // With isotropic inputs the closest point on the sphere is the scaled
    // draw itself; the general solver reproduces that limit.
    let iso = ProjectionProblem::new(w_tilde.clone(), vec![1.0; 4], ProjectionProblem::DEFAULT_TARGET)?;
    let proj_iso = elliptical_project(&iso)?;
    let norm: f64 = w_tilde.iter().map(|w| w * w).sum::<f64>().sqrt();
    let scale = (ProjectionProblem::DEFAULT_TARGET).sqrt() / norm;
    let max_gap = proj_iso
        .w
        .iter()
        .zip(w_tilde.iter().map(|w| w * scale))
        .map(|(got, want)| (got - want).abs())
        .fold(0.0_f64, f64::max);
    println!();
    println!(
        "isotropic d = 1: solver vs radial rescale w~ * sqrt(target)/||w~||, max gap {max_gap:.2e}"
    );
    Ok(())
}
