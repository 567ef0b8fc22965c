//! Heterogeneous storage system description, validation and the worked
//! five-node example.
//!
//! Nodes are 0-based indices everywhere in the crate. Surviving sets are
//! stored sorted, and an [`Assignment`] keeps its per-helper downloads in the
//! same order as the helpers of the set they belong to.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::number::{int, Rational};

/// A sorted, duplicate-free set of node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn new(nodes: impl IntoIterator<Item = usize>) -> Self {
        let mut nodes: Vec<usize> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        NodeSet(nodes)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    /// Position of `node` within the sorted members.
    pub fn position(&self, node: usize) -> Option<usize> {
        self.0.binary_search(&node).ok()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.iter().all(|&n| other.contains(n))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("}")
    }
}

/// Unvalidated system description, as read from a file or built by hand.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecDraft {
    pub file_size: Rational,
    pub storage_cost: Vec<Rational>,
    pub download_cost: Vec<Rational>,
    pub reconstruction_sets: Vec<Vec<usize>>,
    /// Indexed by node; each entry lists that node's helper sets.
    pub surviving_sets: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    NoNodes,
    LengthMismatch,
    NegativeValue,
    NoReconstructionSets,
    EmptySet,
    IndexOutOfRange,
    SelfHelper,
    DuplicateReconstructionSet,
    Unrepairable,
    SupersetPruned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl Diagnostic {
    fn error(kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            kind,
            message: message.into(),
        }
    }

    fn warning(kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            kind,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Result of [`validate`]: every diagnostic plus the pruned spec when no
/// errors were found.
#[derive(Debug, Clone)]
pub struct Validation {
    pub diagnostics: Vec<Diagnostic>,
    pub spec: Option<DssSpec>,
    /// For each node, the draft index of every surviving set that was kept.
    pub kept_surviving_sets: Vec<Vec<usize>>,
}

impl Validation {
    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| !d.is_error())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid system description: {}", .0.iter().map(|d| d.message.as_str()).collect::<Vec<_>>().join("; "))]
pub struct SpecError(pub Vec<Diagnostic>);

/// Checks every structural invariant of a draft. Surviving sets that are
/// supersets of another set of the same node are pruned with a warning.
pub fn validate(draft: &SpecDraft) -> Validation {
    use DiagnosticKind::*;

    let mut diags = Vec::new();
    let n = draft.storage_cost.len();
    if n == 0 {
        diags.push(Diagnostic::error(NoNodes, "storage_cost is empty"));
    }
    if draft.download_cost.len() != n {
        diags.push(Diagnostic::error(
            LengthMismatch,
            format!(
                "download_cost has {} entries but storage_cost has {n}",
                draft.download_cost.len()
            ),
        ));
    }
    if draft.surviving_sets.len() != n {
        diags.push(Diagnostic::error(
            LengthMismatch,
            format!(
                "surviving_sets covers {} nodes but storage_cost has {n}",
                draft.surviving_sets.len()
            ),
        ));
    }
    if draft.file_size.is_negative() {
        diags.push(Diagnostic::error(NegativeValue, "file_size is negative"));
    }
    for (name, costs) in [
        ("storage_cost", &draft.storage_cost),
        ("download_cost", &draft.download_cost),
    ] {
        for (i, c) in costs.iter().enumerate() {
            if c.is_negative() {
                diags.push(Diagnostic::error(
                    NegativeValue,
                    format!("{name}[{i}] is negative"),
                ));
            }
        }
    }

    let check_members = |diags: &mut Vec<Diagnostic>, label: &str, set: &[usize]| {
        if set.is_empty() {
            diags.push(Diagnostic::error(EmptySet, format!("{label} is empty")));
        }
        for &node in set {
            if node >= n {
                diags.push(Diagnostic::error(
                    IndexOutOfRange,
                    format!("{label} references node {node}, but there are {n} nodes"),
                ));
            }
        }
    };

    if draft.reconstruction_sets.is_empty() {
        diags.push(Diagnostic::error(
            NoReconstructionSets,
            "no reconstruction sets given",
        ));
    }
    let mut seen: Vec<NodeSet> = Vec::new();
    for (t, set) in draft.reconstruction_sets.iter().enumerate() {
        check_members(&mut diags, &format!("reconstruction set {t}"), set);
        let normalized = NodeSet::new(set.iter().copied());
        if let Some(prev) = seen.iter().position(|s| *s == normalized) {
            diags.push(Diagnostic::error(
                DuplicateReconstructionSet,
                format!("reconstruction set {t} duplicates set {prev}"),
            ));
        }
        seen.push(normalized);
    }

    let mut kept_indices = Vec::with_capacity(n);
    let mut surviving = Vec::with_capacity(n);
    for (i, sets) in draft.surviving_sets.iter().enumerate() {
        if sets.is_empty() {
            diags.push(Diagnostic::error(
                Unrepairable,
                format!("node {i} has no surviving sets"),
            ));
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (l, set) in sets.iter().enumerate() {
            check_members(&mut diags, &format!("surviving set {l} of node {i}"), set);
            if set.contains(&i) {
                diags.push(Diagnostic::error(
                    SelfHelper,
                    format!("surviving set {l} of node {i} contains the node itself"),
                ));
            }
            normalized.push(NodeSet::new(set.iter().copied()));
        }

        // A set is dropped if some other set is a subset of it; for exact
        // duplicates the earliest copy survives.
        let mut keep = Vec::new();
        for (l, set) in normalized.iter().enumerate() {
            let dominated_by = normalized
                .iter()
                .enumerate()
                .find(|&(m, other)| m != l && other.is_subset(set) && (other.len() < set.len() || m < l));
            match dominated_by {
                Some((m, other)) => diags.push(Diagnostic::warning(
                    SupersetPruned,
                    format!("surviving set {l} {set} of node {i} contains surviving set {m} {other}; pruned"),
                )),
                None => keep.push(l),
            }
        }
        surviving.push(keep.iter().map(|&l| normalized[l].clone()).collect::<Vec<_>>());
        kept_indices.push(keep);
    }

    let has_errors = diags.iter().any(Diagnostic::is_error);
    let spec = (!has_errors).then(|| DssSpec {
        file_size: draft.file_size.clone(),
        storage_cost: draft.storage_cost.clone(),
        download_cost: draft.download_cost.clone(),
        reconstruction_sets: seen,
        surviving_sets: surviving,
    });
    Validation {
        diagnostics: diags,
        spec,
        kept_surviving_sets: kept_indices,
    }
}

/// A validated system description. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DssSpec {
    file_size: Rational,
    storage_cost: Vec<Rational>,
    download_cost: Vec<Rational>,
    reconstruction_sets: Vec<NodeSet>,
    surviving_sets: Vec<Vec<NodeSet>>,
}

impl DssSpec {
    /// Validates `draft`, returning the pruned spec and any warnings.
    pub fn from_draft(draft: &SpecDraft) -> Result<(DssSpec, Vec<Diagnostic>), SpecError> {
        let validation = validate(draft);
        match validation.spec {
            Some(spec) => Ok((spec, validation.diagnostics)),
            None => Err(SpecError(
                validation
                    .diagnostics
                    .into_iter()
                    .filter(|d| d.is_error())
                    .collect(),
            )),
        }
    }

    /// Like [`DssSpec::from_draft`] but drops warnings.
    pub fn new(draft: &SpecDraft) -> Result<DssSpec, SpecError> {
        Self::from_draft(draft).map(|(spec, _)| spec)
    }

    pub fn to_draft(&self) -> SpecDraft {
        SpecDraft {
            file_size: self.file_size.clone(),
            storage_cost: self.storage_cost.clone(),
            download_cost: self.download_cost.clone(),
            reconstruction_sets: self
                .reconstruction_sets
                .iter()
                .map(|s| s.as_slice().to_vec())
                .collect(),
            surviving_sets: self
                .surviving_sets
                .iter()
                .map(|sets| sets.iter().map(|s| s.as_slice().to_vec()).collect())
                .collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.storage_cost.len()
    }

    pub fn file_size(&self) -> &Rational {
        &self.file_size
    }

    pub fn storage_cost(&self) -> &[Rational] {
        &self.storage_cost
    }

    pub fn download_cost(&self) -> &[Rational] {
        &self.download_cost
    }

    pub fn reconstruction_sets(&self) -> &[NodeSet] {
        &self.reconstruction_sets
    }

    pub fn surviving_sets(&self, node: usize) -> &[NodeSet] {
        &self.surviving_sets[node]
    }

    /// τ for `node`.
    pub fn surviving_set_count(&self, node: usize) -> usize {
        self.surviving_sets[node].len()
    }

    /// Every `(node, set, helper)` triple that carries a download amount, in
    /// node, set, helper order.
    pub fn beta_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.surviving_sets.iter().enumerate().flat_map(|(i, sets)| {
            sets.iter()
                .enumerate()
                .flat_map(move |(l, set)| set.iter().map(move |j| (i, l, j)))
        })
    }

    pub fn derive_degrees(&self) -> DerivedDegrees {
        let set_sizes: Vec<usize> = self.reconstruction_sets.iter().map(NodeSet::len).collect();
        let repair_degrees: Vec<usize> = self
            .surviving_sets
            .iter()
            .map(|sets| sets.iter().map(NodeSet::len).max().unwrap_or(0))
            .collect();
        DerivedDegrees {
            k: set_sizes.iter().copied().max().unwrap_or(0),
            k_min: set_sizes.iter().copied().min().unwrap_or(0),
            d: repair_degrees.iter().copied().max().unwrap_or(0),
            set_sizes,
            repair_degrees,
        }
    }
}

/// Reconstruction and repair degrees implied by a spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedDegrees {
    /// Size of each reconstruction set, in spec order.
    pub set_sizes: Vec<usize>,
    /// Largest reconstruction set.
    pub k: usize,
    /// Smallest reconstruction set.
    pub k_min: usize,
    /// Largest surviving set per node.
    pub repair_degrees: Vec<usize>,
    /// Largest surviving set over all nodes.
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("expected {expected} storage amounts, got {got}")]
    AlphaLength { expected: usize, got: usize },
    #[error("storage amount for node {0} is negative")]
    NegativeAlpha(usize),
    #[error("download ({node}, set {set}, helper {helper}) is not induced by the surviving sets")]
    UnknownTriple { node: usize, set: usize, helper: usize },
    #[error("download ({node}, set {set}, helper {helper}) given twice")]
    DuplicateTriple { node: usize, set: usize, helper: usize },
    #[error("download ({node}, set {set}, helper {helper}) is missing")]
    MissingTriple { node: usize, set: usize, helper: usize },
    #[error("download ({node}, set {set}, helper {helper}) is negative")]
    NegativeBeta { node: usize, set: usize, helper: usize },
}

/// Storage per node and download per `(node, surviving set, helper)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    alpha: Vec<Rational>,
    /// `beta[i][l][p]` is the download from the `p`-th helper of set `l` of node `i`.
    beta: Vec<Vec<Vec<Rational>>>,
}

impl Assignment {
    /// Builds an assignment from explicit triples; every induced triple must
    /// appear exactly once.
    pub fn from_triples(
        spec: &DssSpec,
        alpha: Vec<Rational>,
        triples: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Assignment, AssignmentError> {
        let n = spec.node_count();
        if alpha.len() != n {
            return Err(AssignmentError::AlphaLength {
                expected: n,
                got: alpha.len(),
            });
        }
        if let Some(i) = alpha.iter().position(|a| a.is_negative()) {
            return Err(AssignmentError::NegativeAlpha(i));
        }
        let mut slots: Vec<Vec<Vec<Option<Rational>>>> = (0..n)
            .map(|i| {
                spec.surviving_sets(i)
                    .iter()
                    .map(|s| vec![None; s.len()])
                    .collect()
            })
            .collect();
        for (node, set, helper, amount) in triples {
            let pos = spec
                .surviving_sets
                .get(node)
                .and_then(|sets| sets.get(set))
                .and_then(|s| s.position(helper))
                .ok_or(AssignmentError::UnknownTriple { node, set, helper })?;
            if amount.is_negative() {
                return Err(AssignmentError::NegativeBeta { node, set, helper });
            }
            let slot = &mut slots[node][set][pos];
            if slot.is_some() {
                return Err(AssignmentError::DuplicateTriple { node, set, helper });
            }
            *slot = Some(amount);
        }
        let mut beta = Vec::with_capacity(n);
        for (node, sets) in slots.into_iter().enumerate() {
            let mut per_node = Vec::with_capacity(sets.len());
            for (set, slots) in sets.into_iter().enumerate() {
                let mut per_set = Vec::with_capacity(slots.len());
                for (pos, slot) in slots.into_iter().enumerate() {
                    let helper = spec.surviving_sets[node][set].as_slice()[pos];
                    per_set.push(slot.ok_or(AssignmentError::MissingTriple { node, set, helper })?);
                }
                per_node.push(per_set);
            }
            beta.push(per_node);
        }
        Ok(Assignment { alpha, beta })
    }

    /// Builds an assignment by querying `beta(node, set, helper)` for every
    /// induced triple.
    pub fn from_fn(
        spec: &DssSpec,
        alpha: Vec<Rational>,
        mut beta: impl FnMut(usize, usize, usize) -> Rational,
    ) -> Result<Assignment, AssignmentError> {
        let triples: Vec<_> = spec
            .beta_triples()
            .map(|(i, l, j)| (i, l, j, beta(i, l, j)))
            .collect();
        Self::from_triples(spec, alpha, triples)
    }

    /// Same storage on every node and the same download from every helper.
    pub fn uniform(spec: &DssSpec, alpha: Rational, beta: Rational) -> Assignment {
        Self::from_fn(spec, vec![alpha; spec.node_count()], |_, _, _| beta.clone())
            .expect("uniform assignment covers every triple")
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    /// Downloads of set `set` of `node`, aligned with the set's sorted helpers.
    pub fn set_downloads(&self, node: usize, set: usize) -> &[Rational] {
        &self.beta[node][set]
    }

    pub fn beta(&self, spec: &DssSpec, node: usize, set: usize, helper: usize) -> Option<&Rational> {
        let pos = spec.surviving_sets(node).get(set)?.position(helper)?;
        Some(&self.beta[node][set][pos])
    }

    /// All downloads as `(node, set, helper, amount)` in spec order.
    pub fn triples<'a>(
        &'a self,
        spec: &'a DssSpec,
    ) -> impl Iterator<Item = (usize, usize, usize, &'a Rational)> + 'a {
        spec.beta_triples()
            .zip(self.beta.iter().flatten().flatten())
            .map(|((i, l, j), amount)| (i, l, j, amount))
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().all(Zero::is_zero) && self.beta.iter().flatten().flatten().all(Zero::is_zero)
    }
}

/// The five-node worked example: file size 4, storage `(2,2,2,3,2)`, seven
/// reconstruction sets, the surviving sets of its helper table, storage costs
/// `(100,10,10,10,1)` and download costs `(10,1,1,1,1)`.
///
/// Only three download amounts are pinned by the example (node 3 via set 1,
/// node 4 via set 1); the rest is one completion that reproduces the
/// published per-node repair costs `(1/2, 4/3, 1/2, 3/4, 1/2)`. Nodes here are
/// 0-based, so node `U_4` of the example is node 3.
pub fn example_system() -> (DssSpec, Assignment) {
    let draft = SpecDraft {
        file_size: int(4),
        storage_cost: [100, 10, 10, 10, 1].into_iter().map(int).collect(),
        download_cost: [10, 1, 1, 1, 1].into_iter().map(int).collect(),
        reconstruction_sets: vec![
            vec![0, 1, 2],
            vec![0, 2, 4],
            vec![0, 3],
            vec![1, 3],
            vec![1, 4],
            vec![2, 3],
            vec![3, 4],
        ],
        surviving_sets: vec![
            vec![vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]],
            vec![vec![0, 3], vec![2, 3], vec![3, 4]],
            vec![vec![3], vec![4]],
            vec![vec![1, 2], vec![1, 4]],
            vec![vec![2], vec![3]],
        ],
    };
    let spec = DssSpec::new(&draft).expect("fixture is valid");
    let alpha = [2, 2, 2, 3, 2].into_iter().map(int).collect();
    let beta = |node: usize, set: usize, helper: usize| -> Rational {
        int(match (node, set, helper) {
            (0, _, _) => 1,
            (1, 2, 3) => 2,
            (1, _, _) => 1,
            (2, _, _) => 2,
            (3, _, 1) => 1,
            (3, _, _) => 2,
            (4, _, _) => 2,
            _ => unreachable!("no such triple"),
        })
    };
    let assignment = Assignment::from_fn(&spec, alpha, beta).expect("fixture covers all triples");
    (spec, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_draft() -> SpecDraft {
        example_system().0.to_draft()
    }

    #[test]
    fn fixture_validates_cleanly() {
        let v = validate(&fixture_draft());
        assert!(v.diagnostics.is_empty(), "{:?}", v.diagnostics);
        let spec = v.spec.unwrap();
        let taus: Vec<usize> = (0..5).map(|i| spec.surviving_set_count(i)).collect();
        assert_eq!(taus, vec![5, 3, 2, 2, 2]);
    }

    #[test]
    fn superset_surviving_set_is_pruned_with_warning() {
        let mut draft = fixture_draft();
        // {U_1, U_3} alongside {U_3} for node U_5.
        draft.surviving_sets[4].push(vec![0, 2]);
        let v = validate(&draft);
        assert_eq!(v.errors().count(), 0);
        let warnings: Vec<_> = v.warnings().collect();
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].kind, DiagnosticKind::SupersetPruned);
        let spec = v.spec.unwrap();
        assert_eq!(spec.surviving_set_count(4), 2);
        assert_eq!(v.kept_surviving_sets[4], vec![0, 1]);
    }

    #[test]
    fn duplicate_surviving_sets_keep_one_copy() {
        let mut draft = fixture_draft();
        draft.surviving_sets[2] = vec![vec![3], vec![3]];
        let v = validate(&draft);
        assert_eq!(v.warnings().count(), 1);
        assert_eq!(v.spec.unwrap().surviving_set_count(2), 1);
    }

    #[test]
    fn self_helper_is_an_error() {
        let mut draft = fixture_draft();
        draft.surviving_sets[1][0] = vec![1, 3];
        let v = validate(&draft);
        assert!(v.spec.is_none());
        assert!(v.errors().any(|d| d.kind == DiagnosticKind::SelfHelper));
    }

    #[test]
    fn structural_errors_are_reported() {
        let mut draft = fixture_draft();
        draft.reconstruction_sets.push(vec![7]);
        draft.reconstruction_sets.push(vec![]);
        draft.reconstruction_sets.push(vec![3, 0]);
        draft.surviving_sets[3].clear();
        let kinds: Vec<_> = validate(&draft).errors().map(|d| d.kind.clone()).collect();
        assert!(kinds.contains(&DiagnosticKind::IndexOutOfRange));
        assert!(kinds.contains(&DiagnosticKind::EmptySet));
        assert!(kinds.contains(&DiagnosticKind::DuplicateReconstructionSet));
        assert!(kinds.contains(&DiagnosticKind::Unrepairable));
    }

    #[test]
    fn cost_vector_mismatch() {
        let mut draft = fixture_draft();
        draft.download_cost.pop();
        assert!(validate(&draft)
            .errors()
            .any(|d| d.kind == DiagnosticKind::LengthMismatch));
    }

    #[test]
    fn fixture_degrees() {
        let deg = example_system().0.derive_degrees();
        assert_eq!(deg.k, 3);
        assert_eq!(deg.k_min, 2);
        assert_eq!(deg.d, 2);
        assert_eq!(deg.repair_degrees, vec![2, 2, 1, 2, 1]);
        assert_eq!(deg.set_sizes, vec![3, 3, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn single_node_degrees() {
        let draft = SpecDraft {
            file_size: int(1),
            storage_cost: vec![int(1), int(1)],
            download_cost: vec![int(1), int(1)],
            reconstruction_sets: vec![vec![0]],
            surviving_sets: vec![vec![vec![1]], vec![vec![0]]],
        };
        let deg = DssSpec::new(&draft).unwrap().derive_degrees();
        assert_eq!((deg.k, deg.k_min), (1, 1));
    }

    #[test]
    fn fixture_assignment_values() {
        let (spec, asg) = example_system();
        let alpha: Vec<_> = asg.alpha().to_vec();
        assert_eq!(alpha, [2, 2, 2, 3, 2].into_iter().map(int).collect::<Vec<_>>());
        // β(U_4, U_5, S_4^(2)) = 2, β(U_4, U_2, S_4^(2)) = 1, β(U_5, U_4, S_5^(2)) = 2
        assert_eq!(asg.beta(&spec, 3, 1, 4), Some(&int(2)));
        assert_eq!(asg.beta(&spec, 3, 1, 1), Some(&int(1)));
        assert_eq!(asg.beta(&spec, 4, 1, 3), Some(&int(2)));
        assert_eq!(asg.beta(&spec, 4, 1, 0), None);
    }

    #[test]
    fn assignment_rejects_bad_triples() {
        let (spec, asg) = example_system();
        let alpha = asg.alpha().to_vec();
        let mut triples: Vec<_> = asg
            .triples(&spec)
            .map(|(i, l, j, a)| (i, l, j, a.clone()))
            .collect();
        let last = triples.pop().unwrap();
        assert!(matches!(
            Assignment::from_triples(&spec, alpha.clone(), triples.clone()),
            Err(AssignmentError::MissingTriple { .. })
        ));
        triples.push(last.clone());
        triples.push(last);
        assert!(matches!(
            Assignment::from_triples(&spec, alpha.clone(), triples),
            Err(AssignmentError::DuplicateTriple { .. })
        ));
        assert!(matches!(
            Assignment::from_triples(&spec, alpha, vec![(0, 0, 0, int(1))]),
            Err(AssignmentError::UnknownTriple { .. })
        ));
    }

    #[test]
    fn derive_degrees_is_deterministic() {
        let spec = example_system().0;
        assert_eq!(spec.derive_degrees(), spec.derive_degrees());
    }
}
