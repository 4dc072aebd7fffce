//! Printed worked examples for j = 1/2 and j = 1.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use su2mub::mub::{basis_br, mub_set_prime, spherical_basis, LabeledBasis};
use su2mub::su2::Spin;

use crate::CliError;

fn fmt_complex(z: Complex64) -> String {
    let re = if z.re.abs() < 5e-16 { 0.0 } else { z.re };
    let im = if z.im.abs() < 5e-16 { 0.0 } else { z.im };
    format!("{re:+.6}{im:+.6}i")
}

/// `z` as `ω^p` when `z / scale` is a cube root of unity.
fn omega_power(z: Complex64, scale: f64) -> Option<u32> {
    (0..3).find(|&p| {
        (z / scale - Complex64::from_polar(1.0, 2.0 * PI * p as f64 / 3.0)).norm() < 1e-9
    })
}

fn write_basis(s: &mut String, title: &str, basis: &LabeledBasis) {
    let _ = writeln!(s, "  {title}  [{}]", basis.label);
    for (n, v) in basis.vectors.iter().enumerate() {
        let comps: Vec<String> = v.iter().map(|&z| fmt_complex(z)).collect();
        let _ = writeln!(s, "    #{n}: ({})", comps.join(", "));
    }
}

pub fn render_tables() -> Result<String, CliError> {
    let internal = |e: su2mub::error::Error| CliError::Usage(e.to_string());
    let mut s = String::new();

    let half = Spin::from_dim(2).map_err(internal)?;
    let _ = writeln!(s, "j = 1/2, components on (|1/2,-1/2>, |1/2,+1/2>)");
    write_basis(&mut s, "s(1/2)", &spherical_basis(half));
    write_basis(&mut s, "b_0(1/2)", &basis_br(half, 0.0));
    let _ = writeln!(s, "    expected: (1, 1)/sqrt2 ; i(-1, 1)/sqrt2");
    write_basis(&mut s, "b_1(1/2)", &basis_br(half, 1.0));
    let rho = Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0);
    let _ = writeln!(
        s,
        "    expected: (rho, 1/rho)/sqrt2 ; (1/rho, rho)/sqrt2 with rho = e^(i pi/4); rho/sqrt2 = {}",
        fmt_complex(rho)
    );

    let one = Spin::from_dim(3).map_err(internal)?;
    let bases = mub_set_prime(one, 0.0, 1e-10).map_err(internal)?;
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "j = 1, r = 0, components on (|1,-1>, |1,0>, |1,1>); w = e^(2 pi i/3)"
    );
    let scale = 3f64.sqrt().recip();
    for (i, basis) in bases.iter().enumerate() {
        let title = if i == 0 {
            "s(1)".to_string()
        } else {
            format!("a = {}", i - 1)
        };
        write_basis(&mut s, &title, basis);
        if i == 0 {
            continue;
        }
        // global phase fixed so the |1,0> component is real positive
        let rows: Vec<String> = basis
            .vectors
            .iter()
            .map(|v| {
                let phase = v[1].conj() / v[1].norm();
                let powers: Vec<String> = v
                    .iter()
                    .map(|&z| match omega_power(z * phase, scale) {
                        Some(0) => "1".to_string(),
                        Some(1) => "w".to_string(),
                        Some(p) => format!("w^{p}"),
                        None => "?".to_string(),
                    })
                    .collect();
                format!("({})", powers.join(", "))
            })
            .collect();
        let _ = writeln!(s, "    as w-powers /sqrt3: {}", rows.join(" ; "));
    }
    Ok(s)
}
