//! Certificate-producing planners for fiberwise embeddings.
//!
//! Closed fibrations over the sphere are embedded into the product of a
//! pencil with the sphere; the construction identifies every vanishing cycle
//! with one fixed reference cycle of the pencil fiber by an isotopy. Weinstein
//! fibrations over the disk go to `DL(−3) × D²`, whose genus-`g` fibration has
//! vanishing cycles `c₁, c₂, a₁, b₁, …, a_{g−1}, b_{g−1}, a_g`, and every
//! vanishing cycle is sent to `a₁`.
//!
//! Only the homological shadow of those isotopies is computed: for each cycle
//! `ν`, a symplectic `U` with `U·[ν] = [reference]`.

pub mod certificate;

use crate::error::{Error, Result};
use crate::fibration::{Base, Closure, LefschetzData};
use crate::homology::{
    is_primitive, map_primitive_to_e1, subgroup_order_mod_p, HomologyClass, SurfaceSig, SympMatrix, DEFAULT_BFS_CAP,
};
use crate::words::{humphries_system, torus_system, Curve, GeneratorSystem, TwistWord};

pub use certificate::{
    verify, BoundaryRecord, ClosureRecord, CycleEntry, EmbeddingCertificate, FlexibilityReport, GenusRecord,
    GlobalChecks, LetterRecord, ModelRecord, NamedClass, SourceRecord, TargetKind, TargetRecord, VerifyFailure,
    VerifyReport, CERTIFICATE_FORMAT, FIDELITY,
};

pub const NECESSARY_CONDITION: &str = "necessary condition";

/// Where the fibration is embedded, and which twists the target can conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetModel {
    pub kind: TargetKind,
    pub fiber: SurfaceSig,
    pub reference: Curve,
    pub conjugatable: GeneratorSystem,
}

impl TargetModel {
    /// Torus system for genus 1, closed Humphries system otherwise; the
    /// reference cycle is `a₁` (`a` on the torus).
    pub fn closed_pencil(genus: u32) -> Result<Self> {
        let (system, reference) = match genus {
            0 => return Err(Error::UnsupportedGenus { required: 1, found: 0 }),
            1 => (torus_system(), "a"),
            g => (humphries_system(g, false)?, "a1"),
        };
        let reference = system.curve(reference).expect("reference curve exists").clone();
        Ok(TargetModel { kind: TargetKind::ClosedPencil, fiber: system.surface(), reference, conjugatable: system })
    }

    /// Closed target with a different reference class (must be primitive).
    pub fn with_reference(mut self, name: impl Into<String>, class: HomologyClass) -> Result<Self> {
        if !is_primitive(&class) {
            return Err(Error::Domain(format!("reference class {class} is not primitive")));
        }
        self.reference = Curve::new(name, class, self.fiber)?;
        Ok(self)
    }

    pub fn weinstein_dl3(genus: u32) -> Result<Self> {
        if genus < 2 {
            return Err(Error::UnsupportedGenus { required: 2, found: genus });
        }
        let full = humphries_system(genus, true)?;
        let system = full.subset(&dl3_cycle_names(genus))?;
        let reference = system.curve("a1").expect("a1 present").clone();
        Ok(TargetModel { kind: TargetKind::WeinsteinDl3, fiber: system.surface(), reference, conjugatable: system })
    }

    pub fn with_conjugatable(mut self, system: GeneratorSystem) -> Result<Self> {
        if system.surface() != self.fiber {
            return Err(Error::WrongFiber(format!(
                "conjugatable curves live on {}, target fiber is {}",
                system.surface(),
                self.fiber
            )));
        }
        self.conjugatable = system;
        Ok(self)
    }

    fn record(&self) -> Result<TargetRecord> {
        let model = match self.kind {
            TargetKind::ClosedPencil => None,
            TargetKind::WeinsteinDl3 => {
                let m = dl3_model(self.fiber.genus)?;
                Some(ModelRecord { label: m.label().to_owned(), cycles: named(m.cycles()) })
            }
        };
        Ok(TargetRecord {
            kind: self.kind,
            fiber: self.fiber,
            reference: NamedClass { name: self.reference.name.clone(), class: self.reference.class.clone() },
            conjugatable: named(self.conjugatable.curves()),
            model,
        })
    }
}

fn named(curves: &[Curve]) -> Vec<NamedClass> {
    curves.iter().map(|c| NamedClass { name: c.name.clone(), class: c.class.clone() }).collect()
}

fn dl3_cycle_names(genus: u32) -> Vec<String> {
    let mut names = vec!["c1".to_owned(), "c2".to_owned()];
    for i in 1..genus {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    names.push(format!("a{genus}"));
    names
}

/// The `(2, 2)` torus pencil on `CP¹ × CP¹` after blowing up its 8 base
/// points: cycles `(a, b)` repeated six times over the sphere.
pub fn torus22_model() -> LefschetzData {
    let t = torus_system();
    let (a, b) = (t.curve("a").unwrap().clone(), t.curve("b").unwrap().clone());
    let cycles = (0..6).flat_map(|_| [a.clone(), b.clone()]).collect();
    LefschetzData::new(Base::Sphere, t.surface(), cycles, "torus22").expect("valid model")
}

/// The genus-`g` Lefschetz fibration on `DL(−3)` with bounded fiber.
pub fn dl3_model(genus: u32) -> Result<LefschetzData> {
    if genus < 2 {
        return Err(Error::UnsupportedGenus { required: 2, found: genus });
    }
    let system = humphries_system(genus, true)?;
    let cycles = dl3_cycle_names(genus).iter().map(|n| system.curve(n).expect("Humphries curve").clone()).collect();
    LefschetzData::new(Base::Disk, system.surface(), cycles, format!("dl3-g{genus}"))
}

/// Chain `c₁…c₅` on the closed genus-2 surface with classes
/// `a₁, b₁, a₁ + a₂, b₂, a₂`; non-adjacent links are disjoint.
pub fn genus2_chain_system() -> GeneratorSystem {
    let s = SurfaceSig::closed(2);
    let classes: [[i64; 4]; 5] = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
    let curves = classes
        .iter()
        .enumerate()
        .map(|(i, v)| Curve::new(format!("c{}", i + 1), HomologyClass::from_i64s(v).unwrap(), s).unwrap())
        .collect();
    let mut pairs = Vec::new();
    for i in 1..=5 {
        for j in i + 2..=5 {
            pairs.push((format!("c{i}"), format!("c{j}")));
        }
    }
    GeneratorSystem::new(s, curves, pairs).expect("chain system is valid")
}

/// `(c₁ c₂ c₃ c₄ c₅)⁶` over the sphere: 30 vanishing cycles.
pub fn genus2_chain_model() -> LefschetzData {
    let system = genus2_chain_system();
    let cycles = (0..6).flat_map(|_| system.curves().iter().cloned()).collect();
    LefschetzData::new(Base::Sphere, system.surface(), cycles, "genus2-chain").expect("valid model")
}

/// For each prime, the order of the group generated by the conjugatable
/// twists mod `p`. Full image for every prime is a necessary condition for
/// those twists to generate the mapping class group.
pub fn flexibility_witness(target: &TargetModel, primes: &[u64], cap: usize) -> Result<FlexibilityReport> {
    let gens = target.conjugatable.transvections();
    let entries =
        primes.iter().map(|&p| subgroup_order_mod_p(target.fiber.genus, &gens, p, cap)).collect::<Result<Vec<_>>>()?;
    Ok(FlexibilityReport {
        scope: NECESSARY_CONDITION.to_owned(),
        conjugatable: target.conjugatable.curves().iter().map(|c| c.name.clone()).collect(),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanOptions {
    /// Primes for the flexibility witness.
    pub primes: Vec<u64>,
    pub bfs_cap: usize,
    /// Overrides the closed target's reference class.
    pub reference: Option<HomologyClass>,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { primes: vec![2], bfs_cap: DEFAULT_BFS_CAP, reference: None }
    }
}

fn require_simplified(lf: &LefschetzData) -> Result<crate::fibration::ValidationReport> {
    let report = lf.validate();
    if let Some(f) = report.failures.first() {
        return Err(Error::NotSimplified { index: f.index, reason: f.reason.to_string() });
    }
    Ok(report)
}

fn conjugators(lf: &LefschetzData, reference: &HomologyClass) -> Result<Vec<CycleEntry>> {
    let to_reference = map_primitive_to_e1(reference)?.inverse();
    lf.cycles()
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let u: SympMatrix = &to_reference * &map_primitive_to_e1(&c.class)?;
            debug_assert_eq!(&u.apply(&c.class)?, reference);
            Ok(CycleEntry { index, name: c.name.clone(), class: c.class.clone(), conjugator: u.into_int(), word: None })
        })
        .collect()
}

fn source(lf: &LefschetzData) -> SourceRecord {
    SourceRecord { label: lf.label().to_owned(), base: lf.base(), fiber: lf.fiber() }
}

/// Plan the embedding of a closed fibration over the sphere.
pub fn plan_closed_embedding(lf: &LefschetzData, opts: &PlanOptions) -> Result<EmbeddingCertificate> {
    if lf.base() != Base::Sphere {
        return Err(Error::WrongBase("closed target needs a fibration over the sphere".into()));
    }
    if lf.fiber().boundary_components != 0 {
        return Err(Error::WrongFiber("closed target needs closed fibers".into()));
    }
    let genus = lf.fiber().genus;
    if genus < 2 {
        return Err(Error::UnsupportedGenus { required: 2, found: genus });
    }
    let report = require_simplified(lf)?;
    if report.closure != Closure::Identity {
        return Err(Error::NotClosedFibration);
    }

    let mut target = TargetModel::closed_pencil(genus)?;
    if let Some(r) = &opts.reference {
        target = target.with_reference("reference", r.clone())?;
    }
    let per_cycle = conjugators(lf, &target.reference.class)?;
    let flexibility = flexibility_witness(&target, &opts.primes, opts.bfs_cap)?;
    Ok(EmbeddingCertificate {
        format: CERTIFICATE_FORMAT.to_owned(),
        fidelity: FIDELITY.to_owned(),
        source: source(lf),
        target: target.record()?,
        per_cycle,
        global: GlobalChecks {
            closure: ClosureRecord::Identity,
            genus: GenusRecord { genus, minimum: 2, warning: None },
            flexibility,
            boundary_discipline: Vec::new(),
        },
    })
}

/// Plan the embedding of a disk-base fibration with one-boundary fibers into
/// `DL(−3) × D²`.
///
/// `identification_words` are optional mapping classes used to identify the
/// fiber with the `DL(−3)` fiber; each is split as `τ_d^k · ψ` and recorded
/// with its `d`-free part.
pub fn plan_weinstein_embedding(
    lf: &LefschetzData,
    identification_words: &[TwistWord],
    opts: &PlanOptions,
) -> Result<EmbeddingCertificate> {
    if lf.base() != Base::Disk {
        return Err(Error::WrongBase("Weinstein target needs a fibration over the disk".into()));
    }
    if lf.fiber().boundary_components != 1 {
        return Err(Error::WrongFiber("Weinstein target needs fibers with one boundary component".into()));
    }
    let genus = lf.fiber().genus;
    if genus < 2 {
        return Err(Error::UnsupportedGenus { required: 2, found: genus });
    }
    let warning = (genus < 3).then(|| {
        format!("genus {genus} < 3: below the fiber genus guaranteed for Stein fibrations; the construction itself needs only genus ≥ 2")
    });
    require_simplified(lf)?;

    let target = TargetModel::weinstein_dl3(genus)?;
    let mut boundary_discipline = Vec::with_capacity(identification_words.len());
    for (word_index, w) in identification_words.iter().enumerate() {
        if w.system().surface() != lf.fiber() {
            return Err(Error::WrongFiber(format!(
                "identification word {word_index} lives on {}, fiber is {}",
                w.system().surface(),
                lf.fiber()
            )));
        }
        let (k, psi) = w.extract_boundary_prefix()?;
        boundary_discipline.push(BoundaryRecord {
            word_index,
            boundary_exponent: k,
            psi: psi.to_string(),
            d_free: !psi.contains_curve(crate::words::BOUNDARY_CURVE),
        });
    }
    let per_cycle = conjugators(lf, &target.reference.class)?;
    let flexibility = flexibility_witness(&target, &opts.primes, opts.bfs_cap)?;
    Ok(EmbeddingCertificate {
        format: CERTIFICATE_FORMAT.to_owned(),
        fidelity: FIDELITY.to_owned(),
        source: source(lf),
        target: target.record()?,
        per_cycle,
        global: GlobalChecks {
            closure: ClosureRecord::NotApplicable,
            genus: GenusRecord { genus, minimum: 2, warning },
            flexibility,
            boundary_discipline,
        },
    })
}
