//! Embedding certificates and their standalone verifier.
//!
//! A certificate records, for every vanishing cycle, a symplectic integer
//! matrix carrying the cycle's class to the target's reference class. It is a
//! homology-level shadow of the ambient isotopies in the construction and says
//! so in its `fidelity` field. [`verify`] re-derives every check from the
//! serialized data alone.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::homology::GroupOrder;
use crate::homology::{is_primitive, is_symplectic, HomologyClass, IntMatrix, SurfaceSig, SympMatrix};
use crate::words::BOUNDARY_CURVE;

pub const CERTIFICATE_FORMAT: &str = "lefschetz-embedding-certificate/1";
pub const FIDELITY: &str = "homology-level";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    /// Closed fibrations, embedded fiberwise into a product with a pencil.
    ClosedPencil,
    /// Disk-base fibrations with bounded fibers, into `DL(−3) × D²`.
    WeinsteinDl3,
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetKind::ClosedPencil => "closed-pencil",
            TargetKind::WeinsteinDl3 => "weinstein-dl3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedClass {
    pub name: String,
    pub class: HomologyClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub label: String,
    pub cycles: Vec<NamedClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub kind: TargetKind,
    pub fiber: SurfaceSig,
    pub reference: NamedClass,
    pub conjugatable: Vec<NamedClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub label: String,
    pub base: crate::fibration::Base,
    pub fiber: SurfaceSig,
}

/// A letter of a word realization, carrying its class so the certificate stays
/// self-contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterRecord {
    pub curve: String,
    pub exponent: i8,
    pub class: HomologyClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleEntry {
    pub index: usize,
    pub name: String,
    pub class: HomologyClass,
    pub conjugator: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<LetterRecord>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureRecord {
    Identity,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusRecord {
    pub genus: u32,
    pub minimum: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlexibilityReport {
    /// Always "necessary condition": a full image mod p is required for, but
    /// does not prove, generation of the mapping class group.
    pub scope: String,
    pub conjugatable: Vec<String>,
    pub entries: Vec<GroupOrder>,
}

impl FlexibilityReport {
    pub fn all_full(&self) -> bool {
        self.entries.iter().all(|e| e.full)
    }
}

impl fmt::Display for FlexibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "flexibility witness ({}) on [{}]", self.scope, self.conjugatable.join(", "))?;
        for e in &self.entries {
            let verdict = match (e.full, e.is_inconclusive()) {
                (_, true) => "inconclusive",
                (true, _) => "full",
                (false, _) => "not-full",
            };
            writeln!(
                f,
                "  p={}: order {} of |Sp({}, F_{})| = {}: {verdict}",
                e.prime,
                e.order,
                2 * e.genus,
                e.prime,
                e.group_order
            )?;
        }
        Ok(())
    }
}

/// Result of splitting an identification word as `τ_d^k · ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRecord {
    pub word_index: usize,
    pub boundary_exponent: i64,
    pub psi: String,
    pub d_free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalChecks {
    pub closure: ClosureRecord,
    pub genus: GenusRecord,
    pub flexibility: FlexibilityReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary_discipline: Vec<BoundaryRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub format: String,
    pub fidelity: String,
    pub source: SourceRecord,
    pub target: TargetRecord,
    pub per_cycle: Vec<CycleEntry>,
    pub global: GlobalChecks,
}

impl EmbeddingCertificate {
    /// Pretty JSON with a trailing newline; byte-identical for equal certificates.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    /// Offending `per_cycle` position, or `None` for a global check.
    pub index: Option<usize>,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "entry {i}: {}", self.reason),
            None => write!(f, "global: {}", self.reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub checked: usize,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn global(&mut self, reason: impl Into<String>) {
        self.failures.push(VerifyFailure { index: None, reason: reason.into() });
    }

    fn entry(&mut self, index: usize, reason: impl Into<String>) {
        self.failures.push(VerifyFailure { index: Some(index), reason: reason.into() });
    }
}

/// Re-check every claim of a certificate without any planner state.
pub fn verify(cert: &EmbeddingCertificate) -> VerifyReport {
    let mut report = VerifyReport::default();
    if cert.fidelity != FIDELITY {
        report.global(format!("fidelity must be `{FIDELITY}`, found `{}`", cert.fidelity));
    }
    let fiber = cert.target.fiber;
    let rank = fiber.rank();
    if cert.source.fiber != fiber {
        report.global("source and target fibers differ");
    }
    let reference = &cert.target.reference.class;
    if reference.len() != rank {
        report.global(format!("reference class has length {}, expected {rank}", reference.len()));
        return report;
    }
    if !is_primitive(reference) {
        report.global("reference class is not primitive");
    }

    let genus = &cert.global.genus;
    if genus.genus != fiber.genus {
        report.global(format!("recorded genus {} differs from fiber genus {}", genus.genus, fiber.genus));
    }
    if genus.genus < genus.minimum {
        report.global(format!("genus {} below required minimum {}", genus.genus, genus.minimum));
    }

    let mut product = (rank % 2 == 0).then(|| SympMatrix::identity(fiber.genus));
    for (pos, entry) in cert.per_cycle.iter().enumerate() {
        report.checked += 1;
        if entry.index != pos {
            report.entry(pos, format!("index field is {}", entry.index));
        }
        if entry.class.len() != rank {
            report.entry(pos, format!("class has length {}, expected {rank}", entry.class.len()));
            product = None;
            continue;
        }
        if let Some(m) = product.as_mut() {
            m.apply_transvection_left(entry.class.coords(), &BigInt::one());
        }
        let u = &entry.conjugator;
        if u.dim() != rank {
            report.entry(pos, format!("conjugator is {0}×{0}, expected {rank}×{rank}", u.dim()));
            continue;
        }
        if !is_symplectic(u) {
            report.entry(pos, "conjugator does not preserve the intersection form");
        }
        match u.mul_vec(&entry.class) {
            Ok(image) if &image == reference => {}
            Ok(image) => report.entry(pos, format!("conjugator sends {} to {image}, not {reference}", entry.class)),
            Err(e) => report.entry(pos, e.to_string()),
        }
        if let Some(word) = &entry.word {
            match word_action(word, fiber.genus) {
                Ok(m) if m.as_int() == u => {}
                Ok(_) => report.entry(pos, "word realization does not act as the conjugator"),
                Err(reason) => report.entry(pos, reason),
            }
        }
    }

    match (cert.target.kind, cert.global.closure) {
        (TargetKind::ClosedPencil, ClosureRecord::Identity) => {
            if let Some(m) = product {
                if !m.is_identity() {
                    report.global("product of the recorded vanishing-cycle twists is not the identity");
                }
            }
        }
        (TargetKind::WeinsteinDl3, ClosureRecord::NotApplicable) => {}
        (kind, closure) => report.global(format!("closure record {closure:?} is inconsistent with target {kind}")),
    }

    for b in &cert.global.boundary_discipline {
        let has_d = b.psi.split_whitespace().any(|l| l.split('^').next() == Some(BOUNDARY_CURVE));
        if !b.d_free || has_d {
            report.global(format!("identification word {} is not free of `{BOUNDARY_CURVE}`", b.word_index));
        }
    }
    report
}

fn word_action(word: &[LetterRecord], genus: u32) -> Result<SympMatrix, String> {
    let mut m = SympMatrix::identity(genus);
    for l in word {
        if l.exponent.abs() != 1 || l.class.len() != 2 * genus as usize {
            return Err(format!("malformed word letter `{}`", l.curve));
        }
        m.apply_transvection_left(l.class.coords(), &BigInt::from(l.exponent));
    }
    Ok(m)
}
