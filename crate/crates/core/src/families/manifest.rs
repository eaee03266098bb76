use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{family_from_series, from_polynomial, FunctionElement, TotalFamily};
use crate::error::{Error, Result};
use crate::geometry::Polysector;
use crate::series::{MultiIndex, MultiIndexSeries};
use crate::transforms::LaplaceSpec;

/// Where an element's values come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// A stored series coefficient.
    Series,
    /// A closed-form expression.
    ClosedForm,
    /// A quadrature-backed transform.
    Quadrature,
}

/// How to rebuild a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySource {
    /// From a series: the Laplace family when `z0` is given, otherwise the
    /// exact family of a polynomial.
    Series {
        series: MultiIndexSeries,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_complex_vec")]
        z0: Option<Vec<Complex64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    /// A registered testbed entry.
    ClosedForm { id: String },
}

mod opt_complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => crate::json::complex_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Complex64>>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "crate::json::complex_vec")] Vec<Complex64>);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementEntry {
    /// `J`, ascending axis numbers (0-based).
    pub j: Vec<usize>,
    pub n: MultiIndex,
    pub provenance: Provenance,
    /// Value of a constant element, `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyManifest {
    pub dim: usize,
    pub host: Polysector,
    pub index_bound: Vec<usize>,
    pub source: FamilySource,
    #[serde(default)]
    pub elements: Vec<ElementEntry>,
}

impl FamilyManifest {
    pub fn from_family(fam: &TotalFamily) -> Result<Self> {
        let source = fam
            .source()
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("family has no recorded source".into()))?;
        let elements = fam
            .iter()
            .map(|(k, el)| ElementEntry {
                j: k.axes.axes(),
                n: k.index.clone(),
                provenance: fam.provenance(k).expect("stored key"),
                value: match el {
                    FunctionElement::Constant(c) => Some([c.re, c.im]),
                    FunctionElement::Function(_) => None,
                },
            })
            .collect();
        Ok(FamilyManifest { dim: fam.dim(), host: fam.host().clone(), index_bound: fam.index_bound().to_vec(), source, elements })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: FamilyManifest = serde_json::from_str(s)?;
        if m.host.dim() != m.dim || m.index_bound.len() != m.dim {
            return Err(Error::DimensionMismatch { expected: m.dim, got: m.host.dim() });
        }
        Ok(m)
    }

    /// Rebuild the family and check it against the listed constants.
    pub fn build(&self) -> Result<TotalFamily> {
        let fam = match &self.source {
            FamilySource::Series { series, z0: Some(z0), tol } => {
                let mut spec = LaplaceSpec::new(z0.clone())?;
                if let Some(t) = tol {
                    spec = spec.with_tol(*t);
                }
                family_from_series(series, &spec)?
            }
            FamilySource::Series { series, z0: None, .. } => {
                if !series.is_exact() {
                    return Err(Error::InvalidArgument("a series without z0 must be an exact polynomial".into()));
                }
                from_polynomial(series, self.host.clone())?
            }
            FamilySource::ClosedForm { id } => crate::testbed::get(id)?
                .family
                .ok_or_else(|| Error::UnknownEntry(format!("testbed entry {id} has no family")))?,
        };
        if fam.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: fam.dim() });
        }
        for e in &self.elements {
            let el = fam.element(&e.j, &e.n)?;
            if let (Some([re, im]), FunctionElement::Constant(c)) = (e.value, el) {
                if (Complex64::new(re, im) - c).norm() > 1e-12 * c.norm().max(1.0) {
                    return Err(Error::InvalidArgument(format!("constant f_{:?} does not match its source", e.n)));
                }
            }
        }
        Ok(fam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Sector;

    #[test]
    fn polynomial_manifest_roundtrip() {
        let p = MultiIndexSeries::polynomial(2, &[(vec![1, 1], Complex64::new(1.0, 0.0))]).unwrap();
        let host = Polysector::uniform(Sector::new(-1.0, 1.0, 1.0).unwrap(), 2).unwrap();
        let fam = from_polynomial(&p, host).unwrap();
        let m = FamilyManifest::from_family(&fam).unwrap();
        let back = FamilyManifest::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let rebuilt = back.build().unwrap();
        assert_eq!(rebuilt.len(), fam.len());
    }

    #[test]
    fn tampered_constant_is_rejected() {
        let p = MultiIndexSeries::polynomial(1, &[(vec![1], Complex64::new(2.0, 0.0))]).unwrap();
        let host = Polysector::new(vec![Sector::new(-1.0, 1.0, 1.0).unwrap()]).unwrap();
        let mut m = FamilyManifest::from_family(&from_polynomial(&p, host).unwrap()).unwrap();
        m.elements[1].value = Some([3.0, 0.0]);
        assert!(m.build().is_err());
    }
}
