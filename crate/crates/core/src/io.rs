//! File formats: unitary JSON, circuit JSON, distribution CSV, bunching
//! report JSON, ensemble CSV + summary JSON.
//!
//! All numeric payloads are doubles. JSON numbers round-trip exactly
//! (shortest-representation printing); the distribution CSV pins
//! probabilities to 17 significant digits so files diff cleanly across
//! runs and implementations.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bunching::BunchingReport;
use crate::circuit::CircuitSpec;
use crate::ensemble::EnsembleReport;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitaryMatrix};
use crate::model::OutputDistribution;
use crate::scalar::Scalar;

/// On-disk unitary: row-major real and imaginary parts.
#[derive(Debug, Serialize, Deserialize)]
struct UnitaryFile {
    m: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Serialize a unitary to the JSON wire format.
pub fn unitary_to_json(u: &UnitaryMatrix<f64>) -> Result<String> {
    let m = u.dim();
    let row = |i: usize, pick: fn(Complex<f64>) -> f64| -> Vec<f64> {
        (0..m).map(|j| pick(u.get(i, j))).collect()
    };
    let file = UnitaryFile {
        m,
        re: (0..m).map(|i| row(i, |z| z.re)).collect(),
        im: (0..m).map(|i| row(i, |z| z.im)).collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parse a unitary from the JSON wire format, enforcing unitarity at the
/// loaded-matrix tolerance (the residual is reported on failure).
pub fn unitary_from_json(text: &str) -> Result<UnitaryMatrix<f64>> {
    let file: UnitaryFile = serde_json::from_str(text)?;
    let m = file.m;
    if file.re.len() != m || file.im.len() != m {
        return Err(Error::Validation(format!(
            "unitary file declares m={m} but carries {} re rows and {} im rows",
            file.re.len(),
            file.im.len()
        )));
    }
    for (name, rows) in [("re", &file.re), ("im", &file.im)] {
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::Validation(format!(
                "unitary file row in '{name}' has {} entries, expected {m}",
                bad.len()
            )));
        }
    }
    let mat = ComplexMatrix::from_fn(m, m, |i, j| Complex::new(file.re[i][j], file.im[i][j]));
    UnitaryMatrix::with_tolerance(mat, f64::UNITARITY_TOL_LOADED)
}

pub fn save_unitary(path: &Path, u: &UnitaryMatrix<f64>) -> Result<()> {
    fs::write(path, unitary_to_json(u)? + "\n")?;
    Ok(())
}

pub fn load_unitary(path: &Path) -> Result<UnitaryMatrix<f64>> {
    unitary_from_json(&fs::read_to_string(path)?)
}

pub fn circuit_to_json(spec: &CircuitSpec) -> Result<String> {
    Ok(serde_json::to_string_pretty(spec)?)
}

pub fn circuit_from_json(text: &str) -> Result<CircuitSpec> {
    let spec: CircuitSpec = serde_json::from_str(text)?;
    spec.validate()?;
    Ok(spec)
}

pub fn save_circuit(path: &Path, spec: &CircuitSpec) -> Result<()> {
    fs::write(path, circuit_to_json(spec)? + "\n")?;
    Ok(())
}

pub fn load_circuit(path: &Path) -> Result<CircuitSpec> {
    circuit_from_json(&fs::read_to_string(path)?)
}

/// Write "h1,...,hm,probability" rows in colex order, probabilities as
/// 17-significant-digit decimals.
pub fn write_distribution_csv<T: Scalar, W: Write>(
    mut out: W,
    dist: &OutputDistribution<T>,
) -> Result<()> {
    let m = dist.modes();
    let header: Vec<String> = (1..=m).map(|j| format!("h{j}")).collect();
    writeln!(out, "{},probability", header.join(","))?;
    for (state, p) in dist.iter() {
        let occ: Vec<String> = state.as_slice().iter().map(|h| h.to_string()).collect();
        writeln!(out, "{},{:.16e}", occ.join(","), p)?;
    }
    Ok(())
}

pub fn save_distribution_csv<T: Scalar>(path: &Path, dist: &OutputDistribution<T>) -> Result<()> {
    let mut buf = Vec::new();
    write_distribution_csv(&mut buf, dist)?;
    fs::write(path, buf)?;
    Ok(())
}

/// Bunching report JSON: p_bunch, collision_free, per-mode full_bunch, and
/// per-mode r_fb (null where undefined).
pub fn report_to_json<T: Scalar + Serialize>(report: &BunchingReport<T>) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn save_report<T: Scalar + Serialize>(path: &Path, report: &BunchingReport<T>) -> Result<()> {
    fs::write(path, report_to_json(report)? + "\n")?;
    Ok(())
}

/// Per-sample ensemble CSV: "sample,p_b", shortest round-trip decimals.
pub fn write_ensemble_csv<T: Scalar, W: Write>(mut out: W, values: &[T]) -> Result<()> {
    writeln!(out, "sample,p_b")?;
    for (k, v) in values.iter().enumerate() {
        writeln!(out, "{k},{v}")?;
    }
    Ok(())
}

pub fn save_ensemble_csv<T: Scalar>(path: &Path, values: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    write_ensemble_csv(&mut buf, values)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn summary_to_json<T: Scalar + Serialize>(report: &EnsembleReport<T>) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn save_ensemble_summary<T: Scalar + Serialize>(
    path: &Path,
    report: &EnsembleReport<T>,
) -> Result<()> {
    fs::write(path, summary_to_json(report)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitElement;
    use crate::haar::haar_sample;
    use crate::model::{output_distribution, StatisticsModel};
    use crate::rng::Seed;
    use crate::states::InputSpec;

    #[test]
    fn unitary_round_trip_is_exact() {
        let u = haar_sample::<f64>(5, Seed::new(17)).unwrap();
        let text = unitary_to_json(&u).unwrap();
        let back = unitary_from_json(&text).unwrap();
        // JSON doubles use shortest round-trip printing: bit-exact reload.
        assert_eq!(u.matrix(), back.matrix());
    }

    #[test]
    fn loader_enforces_unitarity_and_reports_residual() {
        let text = r#"{"m":2,"re":[[1.0,0.0],[0.0,0.5]],"im":[[0.0,0.0],[0.0,0.0]]}"#;
        match unitary_from_json(text) {
            Err(Error::NotUnitary { residual, tol }) => {
                assert!(residual > 0.5);
                assert_eq!(tol, 1e-8);
            }
            other => panic!("expected unitarity failure, got {other:?}"),
        }
    }

    #[test]
    fn loader_rejects_ragged_rows() {
        let text = r#"{"m":2,"re":[[1.0,0.0],[0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#;
        assert!(matches!(unitary_from_json(text), Err(Error::Validation(_))));
    }

    #[test]
    fn circuit_round_trip() {
        let spec = CircuitSpec::new(
            3,
            vec![
                CircuitElement::Coupler { a: 1, b: 2, t: 0.5 },
                CircuitElement::Phase { mode: 3, phi: 1.57 },
            ],
        );
        let text = circuit_to_json(&spec).unwrap();
        assert!(text.contains("\"coupler\""));
        assert!(text.contains("\"phase\""));
        let back = circuit_from_json(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn circuit_json_field_names() {
        let text = r#"{"m":2,"elements":[{"type":"coupler","a":1,"b":2,"t":0.5}]}"#;
        let spec = circuit_from_json(text).unwrap();
        assert_eq!(spec.elements.len(), 1);
    }

    #[test]
    fn distribution_csv_shape() {
        let u = haar_sample::<f64>(3, Seed::new(18)).unwrap();
        let input = InputSpec::indistinguishable(3, &[1, 2]).unwrap();
        let dist = output_distribution(&u, &input, StatisticsModel::Boson).unwrap();
        let mut buf = Vec::new();
        write_distribution_csv(&mut buf, &dist).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "h1,h2,h3,probability");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("2,0,0,"));
        assert!(lines[6].starts_with("0,0,2,"));
        // 17 significant digits: mantissa of the form d.16-digits e±exp.
        let prob_field = lines[1].rsplit(',').next().unwrap();
        assert!(prob_field.contains('e'));
        let mantissa = prob_field.split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').len(), 18); // "d." + 16 digits
    }

    #[test]
    fn ensemble_csv_shape() {
        let mut buf = Vec::new();
        write_ensemble_csv(&mut buf, &[0.25_f64, 0.5]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "sample,p_b\n0,0.25\n1,0.5\n");
    }

    #[test]
    fn report_json_shape() {
        let u = crate::circuit::preset_unitary::<f64>(&crate::circuit::Preset::QftTritter)
            .unwrap();
        let input = InputSpec::indistinguishable(3, &[1, 2]).unwrap();
        let report = BunchingReport::compute(&u, &input, StatisticsModel::Boson).unwrap();
        let json = report_to_json(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value["p_bunch"].is_number());
        assert!(value["collision_free"].is_number());
        assert_eq!(value["full_bunch"].as_array().unwrap().len(), 3);
        assert_eq!(value["r_fb"].as_array().unwrap().len(), 3);
        assert_eq!(value["model"], "boson");
    }

    #[test]
    fn files_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.json");
        let u = haar_sample::<f64>(4, Seed::new(19)).unwrap();
        save_unitary(&path, &u).unwrap();
        let back = load_unitary(&path).unwrap();
        assert_eq!(u.matrix(), back.matrix());
    }
}
