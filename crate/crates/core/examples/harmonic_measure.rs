//! Two-sided harmonic measure of an axis interval and its genus-one
//! modification, against direct quadrature of the Poisson kernel.

use std::f64::consts::PI;

use num_complex::Complex64;
use potential_axis::balayage::{omega, omega_genus1};
use potential_axis::numeric::quad::integrate;
use potential_axis::QuadOptions;

pub fn run() -> anyhow::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    println!("omega(1, [0,1])  = {:.15}", omega(one, 0.0, 1.0)?.value);
    println!(
        "Omega(1, [0,1])  = {:.15}  (1/4 - 1/pi = {:.15})",
        omega_genus1(one, 0.0, 1.0)?.value,
        0.25 - 1.0 / PI
    );

    for (z, y1, y2) in [
        (Complex64::new(2.0, 1.0), -1.0, 3.0),
        (Complex64::new(-0.3, 5.0), 4.0, 4.5),
        (Complex64::new(10.0, -2.0), -50.0, 0.0),
    ] {
        let closed = omega(z, y1, y2)?.value;
        let x = z.re.abs();
        let poisson = |t: f64| x / (PI * (x * x + (t - z.im).powi(2)));
        let quad = integrate(poisson, y1, y2, QuadOptions::abs(1e-14));
        println!(
            "z = {z:>8}, [{y1}, {y2}]: closed {closed:.12}, quadrature {:.12}, diff {:.1e}",
            quad.value,
            (closed - quad.value).abs()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
