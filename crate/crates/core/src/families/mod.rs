//! Total families of strong asymptotic expansion and their approximants.

mod coherence;
mod extract;
mod manifest;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::SampledFunction;
use crate::geometry::Polysector;
use crate::series::{self, index_box, MultiIndex, MultiIndexSeries};
use crate::transforms::{BorelSum, LaplaceSpec, LaplacedSeries};

pub use coherence::{check_coherence, CoherenceOptions, CoherenceReport, PairResidual};
pub use extract::{extract_element, extract_orders, taylor_coefficients, Limit, ProbeSpec, Richardson};
pub use manifest::{ElementEntry, FamilyManifest, FamilySource, Provenance};

/// Default per-axis cap on stored indices.
pub const DEFAULT_INDEX_BOUND: usize = 8;

/// A nonempty subset of the axes `{0, …, n−1}`, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AxisSet(u64);

impl AxisSet {
    pub fn from_axes(axes: &[usize]) -> Self {
        AxisSet(axes.iter().fold(0, |m, &j| m | (1 << j)))
    }

    pub fn full(n: usize) -> Self {
        AxisSet((1u64 << n) - 1)
    }

    pub fn single(j: usize) -> Self {
        AxisSet(1 << j)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn axes(self) -> Vec<usize> {
        (0..64).filter(|&j| self.contains(j)).collect()
    }

    /// Axes of `{0..n} \ self`, ascending.
    pub fn complement(self, n: usize) -> Vec<usize> {
        (0..n).filter(|&j| !self.contains(j)).collect()
    }

    pub fn union(self, other: AxisSet) -> AxisSet {
        AxisSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: AxisSet) -> bool {
        self.0 & other.0 == 0
    }
}

impl Ord for AxisSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.axes().cmp(&other.axes()))
    }
}

impl PartialOrd for AxisSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AxisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.axes())
    }
}

/// Nonempty subsets of `{0..n}` by cardinality, then lexicographically.
pub fn nonempty_subsets(n: usize) -> Vec<AxisSet> {
    let mut v: Vec<AxisSet> = (1..(1u64 << n)).map(AxisSet).collect();
    v.sort();
    v
}

/// Subsets of the given axes, same ordering.
pub(crate) fn nonempty_subsets_of(axes: &[usize]) -> Vec<AxisSet> {
    let mut v: Vec<AxisSet> = (1..(1u64 << axes.len()))
        .map(|m| AxisSet::from_axes(&(0..axes.len()).filter(|&i| m >> i & 1 == 1).map(|i| axes[i]).collect::<Vec<_>>()))
        .collect();
    v.sort();
    v
}

/// `(J, N_J)`, with `N_J` listed in ascending axis order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyKey {
    pub axes: AxisSet,
    pub index: MultiIndex,
}

impl FamilyKey {
    pub fn new(axes: &[usize], index: MultiIndex) -> Result<Self> {
        let mut sorted: Vec<(usize, usize)> = axes.iter().copied().zip(index.iter().copied()).collect();
        sorted.sort();
        if axes.len() != index.len() || axes.is_empty() || sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("key needs distinct axes, one index each".into()));
        }
        Ok(FamilyKey {
            axes: AxisSet::from_axes(axes),
            index: sorted.into_iter().map(|p| p.1).collect(),
        })
    }
}

/// `f_{N_J}`: a constant when `J` is every axis, otherwise a function on `S_{J'}`.
#[derive(Clone, Debug)]
pub enum FunctionElement {
    Constant(Complex64),
    Function(SampledFunction),
}

impl FunctionElement {
    pub fn eval(&self, z_rest: &[Complex64]) -> Complex64 {
        match self {
            FunctionElement::Constant(c) => *c,
            FunctionElement::Function(f) => f.eval(z_rest),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FunctionElement::Constant(_) => 0,
            FunctionElement::Function(f) => f.dim(),
        }
    }

    pub fn as_function(&self) -> Option<&SampledFunction> {
        match self {
            FunctionElement::Function(f) => Some(f),
            FunctionElement::Constant(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Stored {
    element: FunctionElement,
    provenance: Provenance,
}

/// An indexed collection `{f_{N_J}}` over a host polysector.
#[derive(Clone, Debug)]
pub struct TotalFamily {
    host: Polysector,
    index_bound: Vec<usize>,
    elements: BTreeMap<FamilyKey, Stored>,
    source: Option<FamilySource>,
}

impl TotalFamily {
    pub fn new(host: Polysector, index_bound: Vec<usize>) -> Result<Self> {
        if index_bound.len() != host.dim() {
            return Err(Error::DimensionMismatch { expected: host.dim(), got: index_bound.len() });
        }
        if host.dim() > 16 {
            return Err(Error::InvalidArgument("at most 16 axes".into()));
        }
        Ok(TotalFamily { host, index_bound, elements: BTreeMap::new(), source: None })
    }

    /// Fill every key within the index bound from `make(J, N_J)`.
    pub fn from_generator<F>(host: Polysector, index_bound: Vec<usize>, provenance: Provenance, mut make: F) -> Result<Self>
    where
        F: FnMut(&[usize], &[usize]) -> Result<FunctionElement>,
    {
        let mut fam = TotalFamily::new(host, index_bound)?;
        for set in nonempty_subsets(fam.dim()) {
            let axes = set.axes();
            let bound: Vec<usize> = axes.iter().map(|&j| fam.index_bound[j]).collect();
            for idx in index_box(&bound) {
                let el = make(&axes, &idx)?;
                fam.insert(FamilyKey { axes: set, index: idx }, el, provenance)?;
            }
        }
        Ok(fam)
    }

    pub fn dim(&self) -> usize {
        self.host.dim()
    }

    pub fn host(&self) -> &Polysector {
        &self.host
    }

    pub fn index_bound(&self) -> &[usize] {
        &self.index_bound
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn source(&self) -> Option<&FamilySource> {
        self.source.as_ref()
    }

    pub fn with_source(mut self, source: FamilySource) -> Self {
        self.source = Some(source);
        self
    }

    /// Domain `S_{J'}` for an element keyed by `set`; `None` for constants.
    pub fn element_domain(&self, set: AxisSet) -> Option<Polysector> {
        let rest = set.complement(self.dim());
        (!rest.is_empty()).then(|| self.host.restrict(&rest).expect("nonempty"))
    }

    pub fn insert(&mut self, key: FamilyKey, element: FunctionElement, provenance: Provenance) -> Result<()> {
        let n = self.dim();
        if key.axes.bits() >> n != 0 || key.axes.is_empty() {
            return Err(Error::InvalidArgument(format!("axes {:?} out of range for n={n}", key.axes)));
        }
        let axes = key.axes.axes();
        if key.index.len() != axes.len() {
            return Err(Error::DimensionMismatch { expected: axes.len(), got: key.index.len() });
        }
        if axes.iter().zip(&key.index).any(|(&j, &v)| v > self.index_bound[j]) {
            return Err(Error::InvalidArgument(format!("index {:?} exceeds the index bound", key.index)));
        }
        let want = n - axes.len();
        if element.dim() != want {
            return Err(Error::DimensionMismatch { expected: want, got: element.dim() });
        }
        self.elements.insert(key, Stored { element, provenance });
        Ok(())
    }

    /// Replace an existing element (e.g. to inject a defect in tests).
    pub fn replace(&mut self, key: &FamilyKey, element: FunctionElement) -> Result<()> {
        let prov = self
            .elements
            .get(key)
            .map(|s| s.provenance)
            .ok_or_else(|| Error::MissingElement(format!("{:?} {:?}", key.axes, key.index)))?;
        self.insert(key.clone(), element, prov)
    }

    pub fn get(&self, key: &FamilyKey) -> Result<&FunctionElement> {
        self.elements
            .get(key)
            .map(|s| &s.element)
            .ok_or_else(|| Error::MissingElement(format!("f_{:?} on J={:?}", key.index, key.axes)))
    }

    pub fn element(&self, axes: &[usize], index: &[usize]) -> Result<&FunctionElement> {
        self.get(&FamilyKey::new(axes, index.to_vec())?)
    }

    pub fn provenance(&self, key: &FamilyKey) -> Option<Provenance> {
        self.elements.get(key).map(|s| s.provenance)
    }

    pub fn keys(&self) -> impl Iterator<Item = &FamilyKey> {
        self.elements.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FamilyKey, &FunctionElement)> {
        self.elements.iter().map(|(k, s)| (k, &s.element))
    }
}

/// The elements of a total family with `#J = 1`: `f_{jm}` on `S_{j'}`.
#[derive(Clone, Debug)]
pub struct FirstOrderFamily {
    host: Polysector,
    sequences: Vec<Vec<FunctionElement>>,
}

impl FirstOrderFamily {
    pub fn new(host: Polysector, sequences: Vec<Vec<FunctionElement>>) -> Result<Self> {
        if sequences.len() != host.dim() {
            return Err(Error::DimensionMismatch { expected: host.dim(), got: sequences.len() });
        }
        let want = host.dim() - 1;
        if let Some(e) = sequences.iter().flatten().find(|e| e.dim() != want) {
            return Err(Error::DimensionMismatch { expected: want, got: e.dim() });
        }
        Ok(FirstOrderFamily { host, sequences })
    }

    pub fn dim(&self) -> usize {
        self.host.dim()
    }

    pub fn host(&self) -> &Polysector {
        &self.host
    }

    pub fn sequence(&self, j: usize) -> &[FunctionElement] {
        &self.sequences[j]
    }

    pub fn sequences(&self) -> &[Vec<FunctionElement>] {
        &self.sequences
    }
}

pub fn first_order_of(fam: &TotalFamily) -> FirstOrderFamily {
    let n = fam.dim();
    let mut sequences = vec![Vec::new(); n];
    for (key, el) in fam.iter().filter(|(k, _)| k.axes.len() == 1) {
        sequences[key.axes.axes()[0]].push((key.index[0], el.clone()));
    }
    let sequences = sequences
        .into_iter()
        .map(|mut v| {
            v.sort_by_key(|p| p.0);
            // keep the leading run 0, 1, 2, … without gaps
            v.into_iter().enumerate().take_while(|(i, p)| *i == p.0).map(|(_, p)| p.1).collect()
        })
        .collect();
    FirstOrderFamily { host: fam.host.clone(), sequences }
}

/// `App_N(F)(z) = Σ_{∅≠J} (−1)^{#J+1} Σ_{H_J<N_J} f_{H_J}(z_{J'}) z_J^{H_J}`.
pub fn app_n(fam: &TotalFamily, order: &[usize], z: &[Complex64]) -> Result<Complex64> {
    let n = fam.dim();
    if order.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: order.len() });
    }
    if z.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: z.len() });
    }
    if let Some(j) = (0..n).find(|&j| order[j] > fam.index_bound[j] + 1) {
        return Err(Error::InvalidArgument(format!("N[{j}] = {} exceeds index bound + 1", order[j])));
    }
    if !fam.host.contains(z) {
        return Err(Error::OutsideDomain("z is outside the host polysector".into()));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for set in nonempty_subsets(n) {
        let axes = set.axes();
        if axes.iter().any(|&j| order[j] == 0) {
            continue;
        }
        let rest: Vec<Complex64> = set.complement(n).iter().map(|&j| z[j]).collect();
        let bound: Vec<usize> = axes.iter().map(|&j| order[j] - 1).collect();
        let mut inner = Complex64::new(0.0, 0.0);
        for h in index_box(&bound) {
            let el = fam.get(&FamilyKey { axes: set, index: h.clone() })?;
            let mono: Complex64 = axes.iter().zip(&h).map(|(&j, &p)| z[j].powi(p as i32)).product();
            inner += el.eval(&rest) * mono;
        }
        let sign = if axes.len() % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * inner;
    }
    Ok(total)
}

/// Stored index range: the default cap, further limited by the degree
/// bound when coefficients beyond it are unknown.
fn family_cap(f: &MultiIndexSeries) -> Vec<usize> {
    f.degree_bound()
        .iter()
        .map(|&d| if f.is_exact() { DEFAULT_INDEX_BOUND } else { d.min(DEFAULT_INDEX_BOUND) })
        .collect()
}

/// The exact total family of a polynomial on `host`: `f_{N_J}(z_{J'})` is the
/// coefficient of `z_J^{N_J}` as a polynomial in the remaining variables.
pub fn from_polynomial(p: &MultiIndexSeries, host: Polysector) -> Result<TotalFamily> {
    if p.dim() != host.dim() {
        return Err(Error::DimensionMismatch { expected: host.dim(), got: p.dim() });
    }
    let n = p.dim();
    let cap = family_cap(p);
    let fam = TotalFamily::from_generator(host.clone(), cap, Provenance::ClosedForm, |axes, idx| {
        if axes.len() == n {
            return Ok(FunctionElement::Constant(p.get(idx)));
        }
        let rest: Vec<usize> = (0..n).filter(|j| !axes.contains(j)).collect();
        let sec = p.section(axes, idx)?;
        let domain = host.restrict(&rest)?;
        Ok(FunctionElement::Function(SampledFunction::exact(domain, "poly", move |w| {
            series::evaluate_partial(&sec, w).expect("dimension fixed")
        })))
    })?;
    Ok(fam.with_source(FamilySource::Series { series: p.clone(), z0: None, tol: None }))
}

/// The family `F(f̂)` on `S₀`: constants `f_α`, and for proper `J` the
/// truncated Laplace transform of the partial Borel transform `φ_{α_J}`.
pub fn family_from_series(fhat: &MultiIndexSeries, spec: &LaplaceSpec) -> Result<TotalFamily> {
    spec.validate()?;
    let n = fhat.dim();
    if spec.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: spec.dim() });
    }
    let radii = if fhat.is_exact() || fhat.is_zero() {
        vec![f64::INFINITY; n]
    } else {
        series::fit_gevrey_type(fhat)?.type_estimate
    };
    // z0 against the Borel disc; tails are checked per element below
    BorelSum::new(fhat, &radii, &spec.z0, f64::INFINITY)?;
    let host = spec.domain();
    let cap = family_cap(fhat);
    let fam = TotalFamily::from_generator(host.clone(), cap, Provenance::Quadrature, |axes, idx| {
        if axes.len() == n {
            return Ok(FunctionElement::Constant(fhat.get(idx)));
        }
        let rest: Vec<usize> = (0..n).filter(|j| !axes.contains(j)).collect();
        let domain = host.restrict(&rest)?;
        let sec = fhat.section(axes, idx)?;
        if sec.is_zero() {
            return Ok(FunctionElement::Function(SampledFunction::zero(domain)));
        }
        let sub_radii: Vec<f64> = rest.iter().map(|&j| radii[j]).collect();
        let sub_spec = spec.restrict(&rest);
        let sum = BorelSum::new(&sec, &sub_radii, &sub_spec.z0, spec.tail_tol)?;
        let lap = LaplacedSeries::new(&sec, &sum, &sub_spec);
        Ok(FunctionElement::Function(SampledFunction::with_error(domain, "laplace", move |w| lap.eval(w))))
    })?;
    let mut fam = fam.with_source(FamilySource::Series {
        series: fhat.clone(),
        z0: Some(spec.z0.clone()),
        tol: Some(spec.tol),
    });
    for (key, stored) in fam.elements.iter_mut() {
        if key.axes.len() == n {
            stored.provenance = Provenance::Series;
        }
    }
    Ok(fam)
}
