//! Standard normal pdf, cdf and quantile, plus the Gaussian density at zero
//! used by the Cramer-Wold kernel.
//!
//!     cargo run --example normal_functions

use sliced_ae::normal_math::{
    gaussian_pdf_at_zero, std_normal_cdf, std_normal_pdf, std_normal_quantile, GaussianParams,
    Probability,
};

pub fn run_example() -> sliced_ae::Result<()> {
    println!("{:>6} {:>22} {:>22}", "x", "pdf(x)", "cdf(x)");
    for x in [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0] {
        let cdf = std_normal_cdf(x)?.value();
        println!("{:>6} {:>22.16e} {:>22.16e}", x, std_normal_pdf(x)?, cdf);
    }

    println!("\n{:>8} {:>22} {:>12}", "r", "quantile(r)", "cdf(q) - r");
    for r in [1e-10, 0.025, 0.5, 0.975, 1.0 - 1e-10] {
        let q = std_normal_quantile(Probability::new(r)?);
        let back = std_normal_cdf(q)?.value() - r;
        println!("{:>8.2e} {:>22.16} {:>12.2e}", r, q, back);
    }
    println!("quantile(0) = {}", std_normal_quantile(Probability::new(0.0)?));

    let p = GaussianParams::new(0.0, 2.0)?;
    println!("\nN(0, 2) density at zero: {}", gaussian_pdf_at_zero(p));
    Ok(())
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    run_example()
}
