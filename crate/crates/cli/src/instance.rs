//! Instance files:
//!
//! ```json
//! { "points": [[1, 4], [3, 5], ["4", "5"]], "targets": ["1", "5", "1"] }
//! ```
//!
//! Integers may be JSON numbers or decimal strings. `targets` defaults to
//! all ones.

use std::path::Path;

use hpinterp::{serde_dec, InterpolationInstance, Point, PointSet};
use num_bigint::BigInt;
use num_traits::One;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum IntLit {
    Num(serde_json::Number),
    Str(String),
}

impl IntLit {
    fn parse(&self) -> Result<BigInt, String> {
        match self {
            IntLit::Num(n) => serde_dec::parse(&n.to_string()),
            IntLit::Str(s) => serde_dec::parse(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    points: Vec<Vec<IntLit>>,
    #[serde(default)]
    targets: Option<Vec<IntLit>>,
}

pub fn read_json(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Parses and validates an instance; every point with a shared factor is
/// reported, not just the first.
pub fn parse_instance(text: &str) -> Result<InterpolationInstance, String> {
    let raw: InstanceFile =
        serde_json::from_str(text).map_err(|e| format!("malformed instance: {e}"))?;
    let Some(first) = raw.points.first() else {
        return Err("instance has no points".into());
    };
    let dim = first.len();
    let mut points = Vec::with_capacity(raw.points.len());
    let mut problems = Vec::new();
    for (i, row) in raw.points.iter().enumerate() {
        let coords = row
            .iter()
            .map(IntLit::parse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("point {i}: {e}"))?;
        if coords.len() != dim {
            return Err(format!(
                "point {i}: expected {dim} coordinates, got {}",
                coords.len()
            ));
        }
        let p = Point::new(coords).map_err(|_| format!("point {i}: zero vector or empty"))?;
        let g = p.content();
        if !g.is_one() {
            problems.push(format!("point {i}: entries not coprime (gcd {g})"));
        }
        points.push(p);
    }
    if !problems.is_empty() {
        return Err(problems.join("\n"));
    }
    let targets = match raw.targets {
        None => vec![BigInt::one(); points.len()],
        Some(t) => t
            .iter()
            .enumerate()
            .map(|(i, x)| x.parse().map_err(|e| format!("target {i}: {e}")))
            .collect::<Result<_, _>>()?,
    };
    let set = PointSet::new(dim, points).map_err(|e| e.to_string())?;
    InterpolationInstance::new(set, targets).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_strings() {
        let inst = parse_instance(r#"{"points": [[1, 4], ["3", "-5"]], "targets": [1, "2"]}"#).unwrap();
        assert_eq!(inst.points().len(), 2);
        assert_eq!(inst.targets()[1], BigInt::from(2));
    }

    #[test]
    fn defaults_to_ones() {
        let inst = parse_instance(r#"{"points": [[1, 0]]}"#).unwrap();
        assert_eq!(inst.targets(), &[BigInt::one()]);
    }

    #[test]
    fn reports_every_shared_factor() {
        let err = parse_instance(r#"{"points": [[2, 4], [1, 1], [3, 9]]}"#).unwrap_err();
        assert!(err.contains("point 0: entries not coprime (gcd 2)"), "{err}");
        assert!(err.contains("point 2: entries not coprime (gcd 3)"), "{err}");
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            r#"{"points": []}"#,
            r#"{"points": [[1, 2], [1]]}"#,
            r#"{"points": [[0, 0]]}"#,
            r#"{"points": [[1.5, 2]]}"#,
            r#"{"points": [[1, 2]], "targets": [1, 1]}"#,
            r#"{"points": [[1, 2]], "extra": 1}"#,
        ] {
            assert!(parse_instance(text).is_err(), "accepted {text}");
        }
    }
}
