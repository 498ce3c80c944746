//! The eight node-level delay experiments against the published means.

use georoute::experiment::reproduce_paper;

fn main() -> georoute::Result<()> {
    let rep = reproduce_paper(2024, 150)?;
    println!("range at n=1000: {:.5}, calibrated range at n=10000: {:.5}", rep.small_range, rep.large_range);
    print!("{}", rep.to_csv());
    Ok(())
}
