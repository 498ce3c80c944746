//! Exact one-hop progress against its linear sandwich.

use georoute::geometry::{exact_progress, progress_bounds, PolarStep};
use georoute::ScalingParams;

fn main() -> georoute::Result<()> {
    let s = ScalingParams::new(100_000, 1.0)?;
    println!("M = {:.6}, eps = {:.6}", s.m, s.eps);
    for deg in [0.0f64, 30.0, 60.0, 89.0, 120.0, 180.0] {
        let step = PolarStep::new(s.m, deg.to_radians());
        let (lo, hi) = progress_bounds(step, s.eps)?;
        for d in [s.eps + s.m, 0.5] {
            let exact = exact_progress(d, step);
            println!("angle {deg:>5}  d {d:.4}  {lo:+.3e} <= {exact:+.3e} <= {hi:+.3e}");
        }
    }
    Ok(())
}
