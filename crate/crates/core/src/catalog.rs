//! The pattern catalog: five patterns times five scopes, each in up to four
//! state/edge combinations, stored as text in `data/catalog.toml`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Alphabet, Formula};
use crate::semantics::{enumerate_traces, eval, LassoTrace};
use crate::syntax::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternId {
    Absence,
    Existence,
    Universality,
    Precedence,
    Response,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScopeId {
    #[serde(rename = "globally")]
    Globally,
    #[serde(rename = "before")]
    BeforeR,
    #[serde(rename = "after")]
    AfterQ,
    #[serde(rename = "between")]
    BetweenQandR,
    #[serde(rename = "after_until")]
    AfterQUntilR,
}

impl PatternId {
    pub const ALL: [PatternId; 5] = [
        PatternId::Absence,
        PatternId::Existence,
        PatternId::Universality,
        PatternId::Precedence,
        PatternId::Response,
    ];

    pub fn key(self) -> &'static str {
        match self {
            PatternId::Absence => "absence",
            PatternId::Existence => "existence",
            PatternId::Universality => "universality",
            PatternId::Precedence => "precedence",
            PatternId::Response => "response",
        }
    }

    /// Combinations with a formula. Edges cannot hold forever, so
    /// universality has none for edge conditions.
    pub fn combos(self) -> std::ops::RangeInclusive<u8> {
        match self {
            PatternId::Universality => 0..=1,
            _ => 0..=3,
        }
    }

    /// Whether `P` and `S` may happen in the same state.
    pub fn event_note(self) -> &'static str {
        match self {
            PatternId::Precedence => "P and S are exclusive events",
            PatternId::Response => "P and S are inclusive events",
            _ => "",
        }
    }
}

impl ScopeId {
    pub const ALL: [ScopeId; 5] = [
        ScopeId::Globally,
        ScopeId::BeforeR,
        ScopeId::AfterQ,
        ScopeId::BetweenQandR,
        ScopeId::AfterQUntilR,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ScopeId::Globally => "globally",
            ScopeId::BeforeR => "before",
            ScopeId::AfterQ => "after",
            ScopeId::BetweenQandR => "between",
            ScopeId::AfterQUntilR => "after_until",
        }
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl fmt::Display for ScopeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for PatternId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        PatternId::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| CatalogError::BadKey(s.to_string()))
    }
}

impl FromStr for ScopeId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        ScopeId::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| CatalogError::BadKey(s.to_string()))
    }
}

/// One catalog cell, written `pattern.scope.combo` (e.g. `absence.between.1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub pattern: PatternId,
    pub scope: ScopeId,
    pub combo: u8,
}

impl CellId {
    pub fn new(pattern: PatternId, scope: ScopeId, combo: u8) -> Self {
        CellId {
            pattern,
            scope,
            combo,
        }
    }

    pub fn exists(&self) -> bool {
        self.pattern.combos().contains(&self.combo)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.pattern, self.scope, self.combo)
    }
}

impl FromStr for CellId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let bad = || CatalogError::BadKey(s.to_string());
        let mut parts = s.split('.');
        let (Some(p), Some(sc), Some(c), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let combo: u8 = c.parse().map_err(|_| bad())?;
        if combo > 3 {
            return Err(bad());
        }
        Ok(CellId::new(p.parse()?, sc.parse()?, combo))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Corrected,
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("`{0}` is not a cell key (expected pattern.scope.combo)")]
    BadKey(String),
    #[error("{0} has no formula: edges cannot be universally present")]
    Unsupported(CellId),
    #[error("the printed formula of {cell} does not parse: {error}")]
    Unparseable { cell: CellId, error: ParseError },
    #[error("{cell} needs a binding for {placeholder}")]
    MissingBinding { cell: CellId, placeholder: String },
    #[error("{cell} has no placeholder {placeholder}")]
    ExtraBinding { cell: CellId, placeholder: String },
}

#[derive(Debug, Clone)]
pub struct CellEntry {
    pub id: CellId,
    pub printed: String,
    pub corrected: Option<String>,
    pub notes: String,
    parsed_printed: Result<Formula, ParseError>,
    parsed_corrected: Option<Formula>,
}

impl CellEntry {
    pub fn text(&self, variant: Variant) -> &str {
        match (variant, &self.corrected) {
            (Variant::Corrected, Some(c)) => c,
            _ => &self.printed,
        }
    }

    pub fn template(&self, variant: Variant) -> Result<Formula, CatalogError> {
        if let (Variant::Corrected, Some(f)) = (variant, &self.parsed_corrected) {
            return Ok(f.clone());
        }
        self.parsed_printed
            .clone()
            .map_err(|error| CatalogError::Unparseable { cell: self.id, error })
    }

    /// Cell notes plus the pattern-wide event note.
    pub fn full_notes(&self) -> String {
        let event = self.id.pattern.event_note();
        match (event.is_empty(), self.notes.is_empty()) {
            (true, _) => self.notes.clone(),
            (false, true) => event.to_string(),
            (false, false) => format!("{event}. {}", self.notes),
        }
    }
}

#[derive(Deserialize)]
struct CatalogFile {
    cell: Vec<RawCell>,
}

#[derive(Deserialize)]
struct RawCell {
    key: String,
    printed: String,
    corrected: Option<String>,
    #[serde(default)]
    notes: String,
}

/// Row of the JSON export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedCell {
    pub pattern: PatternId,
    pub scope: ScopeId,
    pub combo: u8,
    pub template_text: String,
    pub corrected: bool,
    pub notes: String,
}

#[derive(Debug)]
pub struct Catalog {
    cells: BTreeMap<CellId, CellEntry>,
}

const CATALOG_TOML: &str = include_str!("../data/catalog.toml");

impl Catalog {
    /// Parses catalog text. Every cell must have a key that exists and a
    /// corrected form that parses; printed forms may be broken.
    pub fn from_toml(text: &str) -> Result<Self, String> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| e.to_string())?;
        let mut cells = BTreeMap::new();
        for raw in file.cell {
            let id: CellId = raw.key.parse().map_err(|e: CatalogError| e.to_string())?;
            if !id.exists() {
                return Err(format!("{id} is not a catalog cell"));
            }
            let parsed_corrected = match &raw.corrected {
                Some(text) => Some(parse(text).map_err(|e| format!("{id}: {e}"))?),
                None => None,
            };
            let parsed_printed = parse(&raw.printed);
            if parsed_corrected.is_none() {
                if let Err(e) = &parsed_printed {
                    return Err(format!("{id}: {e}, and no corrected form is given"));
                }
            }
            let entry = CellEntry {
                id,
                printed: raw.printed,
                corrected: raw.corrected,
                notes: raw.notes,
                parsed_printed,
                parsed_corrected,
            };
            if cells.insert(id, entry).is_some() {
                return Err(format!("{id} is listed twice"));
            }
        }
        if let Some(missing) = all_cells().into_iter().find(|c| !cells.contains_key(c)) {
            return Err(format!("{missing} is missing"));
        }
        Ok(Catalog { cells })
    }

    /// The catalog shipped with the crate.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_toml(CATALOG_TOML).expect("bundled catalog is valid"))
    }

    pub fn entry(&self, id: CellId) -> Result<&CellEntry, CatalogError> {
        self.cells.get(&id).ok_or(CatalogError::Unsupported(id))
    }

    pub fn entries(&self) -> impl Iterator<Item = &CellEntry> {
        self.cells.values()
    }

    pub fn template(&self, id: CellId, variant: Variant) -> Result<Formula, CatalogError> {
        self.entry(id)?.template(variant)
    }

    pub fn export(&self, variant: Variant) -> Vec<ExportedCell> {
        self.entries()
            .map(|e| ExportedCell {
                pattern: e.id.pattern,
                scope: e.id.scope,
                combo: e.id.combo,
                template_text: e.text(variant).to_string(),
                corrected: variant == Variant::Corrected && e.corrected.is_some(),
                notes: e.full_notes(),
            })
            .collect()
    }
}

/// Every cell, in pattern, scope, combination order.
pub fn all_cells() -> Vec<CellId> {
    let mut out = Vec::new();
    for pattern in PatternId::ALL {
        for scope in ScopeId::ALL {
            for combo in pattern.combos() {
                out.push(CellId::new(pattern, scope, combo));
            }
        }
    }
    out
}

/// The corrected template of a cell, with placeholders `P`, `S`, `Q`, `R`.
pub fn template(pattern: PatternId, scope: ScopeId, combo: u8) -> Result<Formula, CatalogError> {
    Catalog::builtin().template(CellId::new(pattern, scope, combo), Variant::Corrected)
}

/// A cell plus formulas for its placeholders.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternInstance {
    pub pattern: PatternId,
    pub scope: ScopeId,
    pub combo: u8,
    pub bindings: BTreeMap<String, Formula>,
}

impl PatternInstance {
    pub fn cell(&self) -> CellId {
        CellId::new(self.pattern, self.scope, self.combo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InstantiateOptions {
    pub variant: Variant,
    /// Use falling instead of rising edges for every edge in the template.
    pub down_edges: bool,
}

pub fn instantiate(inst: &PatternInstance) -> Result<Formula, CatalogError> {
    instantiate_with(inst, InstantiateOptions::default())
}

pub fn instantiate_with(inst: &PatternInstance, opts: InstantiateOptions) -> Result<Formula, CatalogError> {
    let cell = inst.cell();
    let mut template = Catalog::builtin().template(cell, opts.variant)?;
    if opts.down_edges {
        template = template.up_to_down();
    }
    let placeholders = template.atoms();
    if let Some(p) = placeholders.iter().find(|p| !inst.bindings.contains_key(*p)) {
        return Err(CatalogError::MissingBinding {
            cell,
            placeholder: p.clone(),
        });
    }
    if let Some(p) = inst.bindings.keys().find(|p| !placeholders.contains(*p)) {
        return Err(CatalogError::ExtraBinding {
            cell,
            placeholder: p.clone(),
        });
    }
    Ok(template.substitute(&inst.bindings))
}

/// The placeholders a cell's template uses.
pub fn placeholders(id: CellId, variant: Variant) -> Result<BTreeSet<String>, CatalogError> {
    Ok(Catalog::builtin().template(id, variant)?.atoms())
}

/// A buggy attempt at the between-scope absence formula with edge bounds,
/// paired with a trace on which it disagrees with the final formula.
#[derive(Debug, Clone)]
pub struct DerivationFixture {
    pub name: &'static str,
    /// What goes wrong, as a formula that holds somewhere on the witness.
    pub failure_mode: Formula,
    pub formula: Formula,
    pub trace: LassoTrace,
    /// Value of the final formula (and not of `formula`) at position 0.
    pub expected: bool,
}

pub const DERIVATION_FINAL: &str = "[]((up(Q) && !up(R) && <>up(R)) -> X (up(R) P P))";

const DERIVATION_STEPS: [(&str, &str, &str); 3] = [
    (
        "buggy-1",
        "[]((up(Q) && <>up(R)) -> (!P U up(R)))",
        // P is tested in the state that detects the opening edge
        "<>(up(Q) && P)",
    ),
    (
        "buggy-2",
        "[]((up(Q) && <>up(R)) -> X (!P U up(R)))",
        "<>(up(Q) && up(R))",
    ),
    (
        "buggy-3",
        "[]((up(Q) && !up(R) && <>up(R)) -> X (!P U up(R)))",
        "<>(P && up(R))",
    ),
];

/// For each buggy step, the first trace over `P, Q, R` with prefix at
/// most 3 and loop at most 2 that shows its failure mode.
pub fn derivation_fixtures() -> Vec<DerivationFixture> {
    static FIXTURES: OnceLock<Vec<DerivationFixture>> = OnceLock::new();
    FIXTURES
        .get_or_init(|| {
            let alphabet = Alphabet::new(["P", "Q", "R"]).expect("valid alphabet");
            let good = parse(DERIVATION_FINAL).expect("final formula parses");
            DERIVATION_STEPS
                .iter()
                .map(|&(name, text, mode)| {
                    let formula = parse(text).expect("fixture parses");
                    let failure_mode = parse(mode).expect("fixture parses");
                    let trace = enumerate_traces(&alphabet, 3, 2)
                        .find(|t| {
                            let ev = |f: &Formula| eval(f, t, 0).expect("alphabet covers fixtures");
                            ev(&formula) != ev(&good) && ev(&failure_mode)
                        })
                        .unwrap_or_else(|| panic!("no witness for {name}"));
                    let expected = eval(&good, &trace, 0).expect("alphabet covers fixtures");
                    DerivationFixture {
                        name,
                        failure_mode,
                        formula,
                        trace,
                        expected,
                    }
                })
                .collect()
        })
        .clone()
}
