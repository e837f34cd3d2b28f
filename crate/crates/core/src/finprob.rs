//! Finite probability spaces mod p, measure-preserving maps between them and
//! information loss.
//!
//! Spaces are indexed by string labels. Convex combinations namespace the
//! labels of the i-th summand as `i/label`.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{ModDist, ModMeasure};
use crate::error::{Error, Result};
use crate::modular::{PrimeModulus, Residue};

/// A finite set of distinct labels carrying a distribution mod p.
#[derive(Clone)]
pub struct FinProbSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dist: ModDist,
}

impl PartialEq for FinProbSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

impl Eq for FinProbSpace {}

impl fmt::Debug for FinProbSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinProbSpace")
            .field("labels", &self.labels)
            .field("dist", &self.dist.to_string())
            .finish()
    }
}

impl FinProbSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, dist: ModDist) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != dist.len() {
            return Err(Error::LabelCount {
                labels: labels.len(),
                probs: dist.len(),
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinProbSpace { labels, index, dist })
    }

    /// Labels the entries of `dist` as "0", "1", ...
    pub fn indexed(dist: ModDist) -> Self {
        let labels = (0..dist.len()).map(|i| i.to_string());
        FinProbSpace::new(labels, dist).expect("distinct labels")
    }

    /// The one-point space carrying (1).
    pub fn point(p: PrimeModulus) -> Self {
        FinProbSpace::new(["*"], ModDist::point(p)).expect("one label")
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.dist.modulus()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self) -> &ModDist {
        &self.dist
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn prob(&self, label: &str) -> Option<Residue> {
        self.position(label).map(|i| self.dist.probs()[i])
    }

    pub fn entropy(&self) -> Residue {
        self.dist.entropy()
    }

    /// The space ∐ₓ πₓ·Yₓ with labels `x/y`.
    pub fn convex_combination(weights: &ModDist, spaces: &[FinProbSpace]) -> Result<Self> {
        let inner: Vec<ModDist> = spaces.iter().map(|s| s.dist.clone()).collect();
        let dist = weights.compose(&inner)?;
        let labels = spaces
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.labels.iter().map(move |l| format!("{i}/{l}")));
        FinProbSpace::new(labels, dist)
    }
}

/// A measure-preserving map between finite probability spaces mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPMap {
    domain: FinProbSpace,
    codomain: FinProbSpace,
    /// image of domain entry i, as an index into the codomain
    images: Vec<usize>,
}

impl MPMap {
    /// Validates totality, label membership and measure preservation.
    pub fn new<K, V>(
        domain: FinProbSpace,
        codomain: FinProbSpace,
        mapping: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self>
    where
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut images = vec![usize::MAX; domain.len()];
        for (from, to) in mapping {
            let i = domain
                .position(from.as_ref())
                .ok_or_else(|| Error::UnknownLabel(from.as_ref().to_string()))?;
            let j = codomain
                .position(to.as_ref())
                .ok_or_else(|| Error::UnknownLabel(to.as_ref().to_string()))?;
            images[i] = j;
        }
        if let Some(i) = images.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Unmapped(domain.labels[i].clone()));
        }
        Self::from_images(domain, codomain, images)
    }

    /// Same as [`MPMap::new`] with images given by codomain position.
    pub fn from_images(domain: FinProbSpace, codomain: FinProbSpace, images: Vec<usize>) -> Result<Self> {
        if domain.modulus() != codomain.modulus() {
            return Err(Error::ModulusMismatch {
                left: domain.modulus().get(),
                right: codomain.modulus().get(),
            });
        }
        if images.len() != domain.len() {
            return Err(Error::ArityMismatch {
                expected: domain.len(),
                found: images.len(),
            });
        }
        if let Some(&j) = images.iter().find(|&&j| j >= codomain.len()) {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: codomain.len(),
            });
        }
        let pushed = pushforward(domain.dist(), &images, codomain.len());
        for (j, (&got, &want)) in pushed.iter().zip(codomain.dist.probs()).enumerate() {
            if got != want {
                return Err(Error::NotMeasurePreserving {
                    label: codomain.labels[j].clone(),
                    expected: want.value(),
                    found: got.value(),
                });
            }
        }
        Ok(MPMap {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(space: &FinProbSpace) -> Self {
        MPMap {
            domain: space.clone(),
            codomain: space.clone(),
            images: (0..space.len()).collect(),
        }
    }

    /// The unique map to the one-point space.
    pub fn terminal(space: &FinProbSpace) -> Self {
        MPMap {
            domain: space.clone(),
            codomain: FinProbSpace::point(space.modulus()),
            images: vec![0; space.len()],
        }
    }

    pub fn domain(&self) -> &FinProbSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FinProbSpace {
        &self.codomain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image_of(&self, label: &str) -> Option<&str> {
        self.domain
            .position(label)
            .map(|i| self.codomain.labels[self.images[i]].as_str())
    }

    pub fn is_isomorphism(&self) -> bool {
        if self.domain.len() != self.codomain.len() {
            return false;
        }
        let mut hit = vec![false; self.codomain.len()];
        self.images.iter().all(|&j| !std::mem::replace(&mut hit[j], true))
    }

    /// L(f) = H(domain) - H(codomain).
    pub fn info_loss(&self) -> Residue {
        self.domain.entropy() - self.codomain.entropy()
    }

    /// Σ_{x: πₓ ≠ 0} πₓ · H((σ_y/πₓ)_{y ∈ f⁻¹(x)}).
    pub fn conditional_loss(&self) -> Residue {
        let p = self.domain.modulus();
        let mut fibres: Vec<Vec<Residue>> = vec![Vec::new(); self.codomain.len()];
        for (i, &j) in self.images.iter().enumerate() {
            fibres[j].push(self.domain.dist.probs()[i]);
        }
        let mut total = p.zero();
        for (fibre, &weight) in fibres.into_iter().zip(self.codomain.dist.probs()) {
            if weight.is_zero() {
                continue;
            }
            let inv = weight.inv().expect("nonzero");
            let conditional = ModDist::from_residues(p, fibre.into_iter().map(|s| s * inv).collect())
                .expect("fibre of a measure-preserving map normalizes to 1");
            total += weight * conditional.entropy();
        }
        total
    }

    /// Σₓ H̄(σ restricted to f⁻¹(x)) over every codomain point, using the
    /// homogeneous extension H̄. Equals [`MPMap::info_loss`] for every map.
    ///
    /// Differs from [`MPMap::conditional_loss`] exactly when some fibre over
    /// a point of mass zero carries nonzero masses summing to zero mod p.
    pub fn fibrewise_loss(&self) -> Residue {
        let p = self.domain.modulus();
        let mut fibres: Vec<Vec<i128>> = vec![Vec::new(); self.codomain.len()];
        for (i, &j) in self.images.iter().enumerate() {
            fibres[j].push(self.domain.dist.probs()[i].value() as i128);
        }
        fibres
            .iter()
            .map(|fibre| ModMeasure::new(p, fibre).entropy())
            .fold(p.zero(), |acc, h| acc + h)
    }

    /// Whether some fibre over a zero-mass point holds a nonzero mass.
    pub fn has_hidden_zero_fibre(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .any(|(i, &j)| self.codomain.dist.probs()[j].is_zero() && !self.domain.dist.probs()[i].is_zero())
    }

    /// g ∘ f, defined when the codomain of f is the domain of g.
    pub fn then(&self, g: &MPMap) -> Result<MPMap> {
        compose_maps(g, self)
    }
}

/// g ∘ f.
pub fn compose_maps(g: &MPMap, f: &MPMap) -> Result<MPMap> {
    if f.codomain != g.domain {
        return Err(Error::CompositionMismatch);
    }
    Ok(MPMap {
        domain: f.domain.clone(),
        codomain: g.codomain.clone(),
        images: f.images.iter().map(|&j| g.images[j]).collect(),
    })
}

/// The map ∐ₓ λₓ fₓ between convex combinations of domains and codomains.
pub fn convex_combine_maps(weights: &ModDist, maps: &[MPMap]) -> Result<MPMap> {
    if weights.len() != maps.len() {
        return Err(Error::ArityMismatch {
            expected: weights.len(),
            found: maps.len(),
        });
    }
    if let Some(bad) = maps.iter().find(|f| f.domain.modulus() != weights.modulus()) {
        return Err(Error::ModulusMismatch {
            left: weights.modulus().get(),
            right: bad.domain.modulus().get(),
        });
    }
    let domains: Vec<FinProbSpace> = maps.iter().map(|f| f.domain.clone()).collect();
    let codomains: Vec<FinProbSpace> = maps.iter().map(|f| f.codomain.clone()).collect();
    let domain = FinProbSpace::convex_combination(weights, &domains)?;
    let codomain = FinProbSpace::convex_combination(weights, &codomains)?;
    let mut images = Vec::with_capacity(domain.len());
    let mut offset = 0;
    for f in maps {
        images.extend(f.images.iter().map(|&j| j + offset));
        offset += f.codomain.len();
    }
    Ok(MPMap {
        domain,
        codomain,
        images,
    })
}

pub fn terminal_map(space: &FinProbSpace) -> MPMap {
    MPMap::terminal(space)
}

pub fn info_loss(f: &MPMap) -> Residue {
    f.info_loss()
}

/// Image measure of `dist` along `images` on a target of size `target_len`.
pub fn pushforward(dist: &ModDist, images: &[usize], target_len: usize) -> Vec<Residue> {
    let p = dist.modulus();
    let mut out = vec![p.zero(); target_len];
    for (&w, &j) in dist.probs().iter().zip(images) {
        out[j] += w;
    }
    out
}

/// A random measure-preserving map from an `m`-point space onto a
/// `k`-point space whose distribution is the pushforward.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, p: PrimeModulus, m: usize, k: usize) -> MPMap {
    let source = ModDist::random(rng, p, m);
    let images: Vec<usize> = (0..m).map(|_| rng.gen_range(0..k)).collect();
    map_with_images(source, images, k)
}

/// Builds the map `images` out of `source`, with the pushforward as target.
pub fn map_with_images(source: ModDist, images: Vec<usize>, k: usize) -> MPMap {
    let p = source.modulus();
    let target = ModDist::from_residues(p, pushforward(&source, &images, k)).expect("pushforward sums to 1");
    let domain = FinProbSpace::new((0..source.len()).map(|i| format!("y{i}")), source).expect("distinct");
    let codomain = FinProbSpace::new((0..k).map(|j| format!("x{j}")), target).expect("distinct");
    MPMap::from_images(domain, codomain, images).expect("pushforward is measure-preserving")
}

#[derive(Debug, Serialize, Deserialize)]
struct SpaceRecord {
    p: u64,
    labels: Vec<String>,
    probs: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MapRecord {
    domain: SpaceRecord,
    codomain: SpaceRecord,
    mapping: serde_json::Map<String, serde_json::Value>,
}

impl SpaceRecord {
    fn from_space(s: &FinProbSpace) -> Self {
        SpaceRecord {
            p: s.modulus().get(),
            labels: s.labels.clone(),
            probs: s.dist.probs().iter().map(|r| r.value() as i64).collect(),
        }
    }

    fn into_space(self) -> Result<FinProbSpace> {
        let p = PrimeModulus::new(self.p)?;
        let values: Vec<i128> = self.probs.iter().map(|&v| v as i128).collect();
        FinProbSpace::new(self.labels, ModDist::new(p, &values)?)
    }
}

impl FinProbSpace {
    /// `{"p":3,"labels":[...],"probs":[...]}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpaceRecord::from_space(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<SpaceRecord>(text)?.into_space()
    }
}

impl MPMap {
    /// `{"domain":space,"codomain":space,"mapping":{label:label}}`, with the
    /// mapping listed in domain order.
    pub fn to_json(&self) -> String {
        let mapping = self
            .domain
            .labels
            .iter()
            .zip(&self.images)
            .map(|(l, &j)| (l.clone(), serde_json::Value::String(self.codomain.labels[j].clone())))
            .collect();
        let record = MapRecord {
            domain: SpaceRecord::from_space(&self.domain),
            codomain: SpaceRecord::from_space(&self.codomain),
            mapping,
        };
        serde_json::to_string(&record).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: MapRecord = serde_json::from_str(text)?;
        let mut pairs = Vec::with_capacity(record.mapping.len());
        for (k, v) in record.mapping {
            let v = v
                .as_str()
                .ok_or_else(|| Error::Json(format!("image of {k:?} is not a string")))?
                .to_string();
            pairs.push((k, v));
        }
        MPMap::new(record.domain.into_space()?, record.codomain.into_space()?, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn space(p: u64, labels: &[&str], probs: &[i128]) -> FinProbSpace {
        FinProbSpace::new(labels.iter().copied(), ModDist::new(pm(p), probs).unwrap()).unwrap()
    }

    fn four_to_two() -> MPMap {
        let dom = space(3, &["a", "b", "c", "d"], &[1, 1, 1, 1]);
        let cod = space(3, &["x", "y"], &[2, 2]);
        MPMap::new(dom, cod, [("a", "x"), ("b", "x"), ("c", "y"), ("d", "y")]).unwrap()
    }

    #[test]
    fn make_map_examples() {
        let s = space(5, &["a", "b"], &[2, 4]);
        let id = MPMap::new(s.clone(), s.clone(), [("a", "a"), ("b", "b")]).unwrap();
        assert_eq!(id, MPMap::identity(&s));
        four_to_two();

        let dom = space(3, &["a", "b", "c", "d"], &[1, 1, 1, 1]);
        let cod = space(3, &["x", "y"], &[2, 2]);
        let err = MPMap::new(dom, cod, [("a", "x"), ("b", "x"), ("c", "x"), ("d", "y")]).unwrap_err();
        assert_eq!(
            err,
            Error::NotMeasurePreserving {
                label: "x".into(),
                expected: 2,
                found: 0
            }
        );
    }

    #[test]
    fn make_map_label_errors() {
        let s = space(5, &["a", "b"], &[2, 4]);
        assert_eq!(
            MPMap::new(s.clone(), s.clone(), [("a", "a"), ("b", "q")]).unwrap_err(),
            Error::UnknownLabel("q".into())
        );
        assert_eq!(
            MPMap::new(s.clone(), s.clone(), [("a", "a")]).unwrap_err(),
            Error::Unmapped("b".into())
        );
        assert!(matches!(
            FinProbSpace::new(["a", "a"], ModDist::new(pm(5), &[2, 4]).unwrap()),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn info_loss_examples() {
        let f = four_to_two();
        assert_eq!(f.info_loss().value(), 1);
        assert_eq!(f.conditional_loss().value(), 1);
        let s = space(3, &["a", "b", "c", "d"], &[1, 1, 1, 1]);
        assert!(MPMap::identity(&s).info_loss().is_zero());
        assert_eq!(terminal_map(&s).info_loss().value(), 2);
        assert_eq!(terminal_map(&space(5, &["a", "b"], &[2, 4])).info_loss().value(), 4);
        let pt = FinProbSpace::point(pm(3));
        assert_eq!(terminal_map(&pt), MPMap::identity(&pt));
    }

    #[test]
    fn zero_mass_fibre_with_nonzero_entries() {
        // three points of mass 1 collapse onto a point of mass 3 ≡ 0
        let dom = space(3, &["a", "b", "c", "d"], &[1, 1, 1, 1]);
        let cod = space(3, &["x", "y"], &[0, 1]);
        let f = MPMap::new(dom, cod, [("a", "x"), ("b", "x"), ("c", "x"), ("d", "y")]).unwrap();
        assert!(f.has_hidden_zero_fibre());
        assert_eq!(f.info_loss().value(), 2);
        assert_eq!(f.fibrewise_loss().value(), 2);
        assert_eq!(f.conditional_loss().value(), 0);
    }

    #[test]
    fn fibrewise_form_matches_conditional_form_on_nonzero_fibres() {
        let f = four_to_two();
        assert!(!f.has_hidden_zero_fibre());
        assert_eq!(f.fibrewise_loss(), f.conditional_loss());
    }

    #[test]
    fn composition() {
        let f = four_to_two();
        let id = MPMap::identity(f.domain());
        assert_eq!(compose_maps(&f, &id).unwrap(), f);
        let t = terminal_map(f.codomain());
        let tf = compose_maps(&t, &f).unwrap();
        assert_eq!(tf, terminal_map(f.domain()));
        assert_eq!(tf.info_loss(), t.info_loss() + f.info_loss());
        assert_eq!(compose_maps(&f, &f).unwrap_err(), Error::CompositionMismatch);
    }

    #[test]
    fn stacked_uniform_collapses() {
        let p = pm(3);
        let u8 = ModDist::uniform(8, p).unwrap();
        let f = map_with_images(u8, (0..8).map(|i| i / 2).collect(), 4);
        let g = terminal_map(f.codomain());
        let gf = compose_maps(&g, &f).unwrap();
        assert_eq!(gf.info_loss(), crate::modular::fermat_quotient(8, p).unwrap());
        assert_eq!(gf.info_loss(), g.info_loss() + f.info_loss());
        // fq_3(8) = 3·fq_3(2) = 0
        assert!(gf.info_loss().is_zero());
    }

    #[test]
    fn convex_combinations() {
        let f = four_to_two();
        let single = convex_combine_maps(&ModDist::point(pm(3)), std::slice::from_ref(&f)).unwrap();
        assert_eq!(single.info_loss(), f.info_loss());
        assert_eq!(single.image_of("0/a"), Some("0/x"));

        let g = terminal_map(&space(3, &["u", "v"], &[2, 2]));
        let lambda = ModDist::new(pm(3), &[2, 2]).unwrap();
        let combo = convex_combine_maps(&lambda, &[f.clone(), g.clone()]).unwrap();
        let two = pm(3).residue(2);
        assert_eq!(combo.info_loss(), two * f.info_loss() + two * g.info_loss());
        assert_eq!(combo.conditional_loss(), combo.info_loss());

        let a = MPMap::identity(f.domain());
        let b = MPMap::identity(g.domain());
        let iso = convex_combine_maps(&lambda, &[a, b]).unwrap();
        assert!(iso.is_isomorphism());
        assert!(iso.info_loss().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let f = four_to_two();
        let text = f.to_json();
        assert_eq!(
            text,
            r#"{"domain":{"p":3,"labels":["a","b","c","d"],"probs":[1,1,1,1]},"codomain":{"p":3,"labels":["x","y"],"probs":[2,2]},"mapping":{"a":"x","b":"x","c":"y","d":"y"}}"#
        );
        let back = MPMap::from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
        let s = f.codomain();
        assert_eq!(FinProbSpace::from_json(&s.to_json()).unwrap(), *s);
    }

    #[test]
    fn json_rejects_invalid_maps() {
        let text = r#"{"domain":{"p":3,"labels":["a","b"],"probs":[2,2]},"codomain":{"p":3,"labels":["x"],"probs":[1]},"mapping":{"a":"x"}}"#;
        assert_eq!(MPMap::from_json(text).unwrap_err(), Error::Unmapped("b".into()));
        assert!(matches!(MPMap::from_json("{"), Err(Error::Json(_))));
    }
}
