//! Named space presets with the grammar `name:key=value,key=value,...`;
//! list values are dash-separated. Unknown names and malformed parameters are
//! rejected before any construction work.

use crate::catalog::{self, CatalogError};
use crate::space::HomogeneousSpace;

#[derive(Clone, Debug, PartialEq)]
pub enum Preset {
    Hopf { n: usize, lambda: f64 },
    Su2Berger { lambda: f64 },
    FlagSu { partition: Vec<usize>, i0: usize, lambda: f64 },
    WallachSu3 { l: usize, lambda: f64 },
    KsymSu { n: usize, exponents: Vec<i64>, order: u32, lambda: f64 },
}

/// Preset names with their parameter grammars, as shown by the catalog
/// listing.
pub fn listing() -> &'static [(&'static str, &'static str)] {
    &[
        ("hopf", "hopf:n=<int≥1>,lambda=<positive real>"),
        ("su2-berger", "su2-berger:lambda=<positive real>"),
        (
            "flag-su",
            "flag-su:partition=<d1-d2-...>,i0=<block boundary>,lambda=<positive real>",
        ),
        ("wallach-su3", "wallach-su3:l=<1|2|3>,lambda=<positive real>"),
        (
            "ksym-su",
            "ksym-su:n=<int≥2>,exp=<a1-a2-...>,k=<even int>,lambda=<positive real>",
        ),
    ]
}

struct Params {
    pairs: Vec<(String, String)>,
}

impl Params {
    fn parse(body: &str) -> Result<Self, CatalogError> {
        let mut pairs = Vec::new();
        if body.is_empty() {
            return Ok(Self { pairs });
        }
        for item in body.split(',') {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                CatalogError::BadPreset(format!("expected key=value, got '{item}'"))
            })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Self { pairs })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        let pos = self.pairs.iter().position(|(k, _)| k == key)?;
        Some(self.pairs.remove(pos).1)
    }

    fn finish(self, preset: &str) -> Result<(), CatalogError> {
        if let Some((k, _)) = self.pairs.first() {
            return Err(CatalogError::BadPreset(format!(
                "unknown key '{k}' for preset '{preset}'"
            )));
        }
        Ok(())
    }
}

fn parse_f64(value: &str, key: &str) -> Result<f64, CatalogError> {
    value
        .parse()
        .map_err(|_| CatalogError::BadPreset(format!("{key} = '{value}' is not a real number")))
}

fn parse_usize(value: &str, key: &str) -> Result<usize, CatalogError> {
    value
        .parse()
        .map_err(|_| CatalogError::BadPreset(format!("{key} = '{value}' is not an integer")))
}

fn parse_dash_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>, CatalogError> {
    value
        .split('-')
        .map(|item| {
            item.parse().map_err(|_| {
                CatalogError::BadPreset(format!("{key} = '{value}' is not a dash-separated list"))
            })
        })
        .collect()
}

fn lambda_or_default(params: &mut Params) -> Result<f64, CatalogError> {
    let lambda = match params.take("lambda") {
        Some(v) => parse_f64(&v, "lambda")?,
        None => 2.0,
    };
    if !(lambda > 0.0) {
        return Err(CatalogError::BadPreset(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    Ok(lambda)
}

/// Parses a preset string. Validation of parameter ranges that require no
/// construction (positivity of λ, key names) happens here.
pub fn parse(text: &str) -> Result<Preset, CatalogError> {
    let (name, body) = match text.split_once(':') {
        Some((n, b)) => (n.trim(), b),
        None => (text.trim(), ""),
    };
    let mut params = Params::parse(body)?;
    let preset = match name {
        "hopf" => {
            let n = match params.take("n") {
                Some(v) => parse_usize(&v, "n")?,
                None => 1,
            };
            let lambda = lambda_or_default(&mut params)?;
            Preset::Hopf { n, lambda }
        }
        "su2-berger" => {
            let lambda = lambda_or_default(&mut params)?;
            Preset::Su2Berger { lambda }
        }
        "flag-su" => {
            let partition = match params.take("partition") {
                Some(v) => parse_dash_list(&v, "partition")?,
                None => {
                    return Err(CatalogError::BadPreset(
                        "flag-su requires partition=<d1-d2-...>".into(),
                    ))
                }
            };
            let i0 = match params.take("i0") {
                Some(v) => parse_usize(&v, "i0")?,
                None => return Err(CatalogError::BadPreset("flag-su requires i0=<index>".into())),
            };
            let lambda = lambda_or_default(&mut params)?;
            Preset::FlagSu { partition, i0, lambda }
        }
        "wallach-su3" => {
            let l = match params.take("l") {
                Some(v) => parse_usize(&v, "l")?,
                None => 3,
            };
            let lambda = lambda_or_default(&mut params)?;
            Preset::WallachSu3 { l, lambda }
        }
        "ksym-su" => {
            let n = match params.take("n") {
                Some(v) => parse_usize(&v, "n")?,
                None => return Err(CatalogError::BadPreset("ksym-su requires n=<int>".into())),
            };
            let exponents = match params.take("exp") {
                Some(v) => parse_dash_list(&v, "exp")?,
                None => {
                    return Err(CatalogError::BadPreset(
                        "ksym-su requires exp=<a1-a2-...>".into(),
                    ))
                }
            };
            let order = match params.take("k") {
                Some(v) => parse_usize(&v, "k")? as u32,
                None => return Err(CatalogError::BadPreset("ksym-su requires k=<even int>".into())),
            };
            let lambda = lambda_or_default(&mut params)?;
            Preset::KsymSu { n, exponents, order, lambda }
        }
        other => {
            return Err(CatalogError::UnknownPreset {
                name: other.to_string(),
            })
        }
    };
    params.finish(name)?;
    Ok(preset)
}

impl Preset {
    /// Replaces the deformation parameter.
    pub fn with_lambda(mut self, new_lambda: f64) -> Self {
        match &mut self {
            Preset::Hopf { lambda, .. }
            | Preset::Su2Berger { lambda }
            | Preset::FlagSu { lambda, .. }
            | Preset::WallachSu3 { lambda, .. }
            | Preset::KsymSu { lambda, .. } => *lambda = new_lambda,
        }
        self
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Preset::Hopf { lambda, .. }
            | Preset::Su2Berger { lambda }
            | Preset::FlagSu { lambda, .. }
            | Preset::WallachSu3 { lambda, .. }
            | Preset::KsymSu { lambda, .. } => *lambda,
        }
    }

    pub fn build(&self) -> Result<HomogeneousSpace, CatalogError> {
        match self {
            Preset::Hopf { n, lambda } => catalog::hopf_sphere(*n, *lambda),
            Preset::Su2Berger { lambda } => catalog::su2_berger(*lambda),
            Preset::FlagSu { partition, i0, lambda } => catalog::flag_su(partition, *i0, *lambda),
            Preset::WallachSu3 { l, lambda } => catalog::wallach_su3(*l, *lambda),
            Preset::KsymSu { n, exponents, order, lambda } => {
                catalog::k_symmetric_su(*n, exponents, *order, *lambda).map(|(space, _)| space)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_grammar() {
        assert_eq!(
            parse("hopf:n=1,lambda=2").unwrap(),
            Preset::Hopf { n: 1, lambda: 2.0 }
        );
        assert_eq!(
            parse("su2-berger:lambda=4").unwrap(),
            Preset::Su2Berger { lambda: 4.0 }
        );
        assert_eq!(
            parse("flag-su:partition=1-1-1,i0=1,lambda=2").unwrap(),
            Preset::FlagSu {
                partition: vec![1, 1, 1],
                i0: 1,
                lambda: 2.0
            }
        );
        assert_eq!(
            parse("wallach-su3:l=3,lambda=2").unwrap(),
            Preset::WallachSu3 { l: 3, lambda: 2.0 }
        );
        assert_eq!(
            parse("ksym-su:n=3,exp=0-1-2,k=4,lambda=2").unwrap(),
            Preset::KsymSu {
                n: 3,
                exponents: vec![0, 1, 2],
                order: 4,
                lambda: 2.0
            }
        );
    }

    #[test]
    fn rejects_unknown_names_and_bad_parameters() {
        assert!(matches!(
            parse("klein-bottle:lambda=2"),
            Err(CatalogError::UnknownPreset { .. })
        ));
        assert!(matches!(
            parse("hopf:n=1,swirl=9"),
            Err(CatalogError::BadPreset(_))
        ));
        assert!(matches!(
            parse("hopf:n=abc"),
            Err(CatalogError::BadPreset(_))
        ));
        // Negative λ is rejected before any construction.
        assert!(matches!(
            parse("hopf:n=1,lambda=-1"),
            Err(CatalogError::BadPreset(_))
        ));
    }

    #[test]
    fn builds_every_listed_family() {
        for text in [
            "hopf:n=1,lambda=2",
            "su2-berger:lambda=4",
            "flag-su:partition=1-1-1,i0=1,lambda=2",
            "wallach-su3:l=3,lambda=2",
            "ksym-su:n=3,exp=0-1-2,k=4,lambda=2",
        ] {
            let space = parse(text).unwrap().build().unwrap();
            assert!(!space.is_degenerate(), "{text}");
        }
    }

    #[test]
    fn lambda_override() {
        let p = parse("hopf:n=1,lambda=2").unwrap().with_lambda(5.0);
        assert_eq!(p.lambda(), 5.0);
        let space = p.build().unwrap();
        assert_eq!(space.lambdas, vec![1.0, 5.0]);
    }
}
