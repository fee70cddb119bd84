//! Linguistic scale, fuzzy pairwise comparison systems, α-grids and their
//! JSON documents.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::fuzzy::{check_alpha, FuzzyError, Interval, Tfn};

/// One of the nine linguistic judgments `"1"` through `"9"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinguisticTerm(u8);

impl LinguisticTerm {
    pub const ONE: LinguisticTerm = LinguisticTerm(1);

    pub fn new(level: u8) -> Option<Self> {
        (1..=9).contains(&level).then_some(Self(level))
    }

    pub fn parse(label: &str) -> Option<Self> {
        match label.as_bytes() {
            [d @ b'1'..=b'9'] => Some(Self(d - b'0')),
            _ => None,
        }
    }

    pub fn all() -> impl Iterator<Item = LinguisticTerm> {
        (1..=9).map(LinguisticTerm)
    }

    pub fn level(self) -> u8 {
        self.0
    }

    pub fn label(self) -> String {
        self.0.to_string()
    }

    pub fn description(self) -> &'static str {
        match self.0 {
            1 => "Equally preference",
            3 => "Weakly preference",
            5 => "Essentially preference",
            7 => "Very strong preference",
            9 => "Absolutely preference",
            _ => "Intermediate value",
        }
    }

    /// The triangular fuzzy number this judgment stands for.
    pub fn tfn(self) -> Tfn {
        let m = f64::from(self.0);
        let t = match self.0 {
            1 | 9 => Tfn::new(m, m, m),
            _ => Tfn::new(m - 1.0, m, m + 1.0),
        };
        t.expect("scale TFNs are well ordered")
    }
}

impl fmt::Display for LinguisticTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for LinguisticTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for LinguisticTerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let label = String::deserialize(d)?;
        LinguisticTerm::parse(&label)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown linguistic term {label:?}")))
    }
}

/// `label → TFN` lookup over the nine scale terms.
pub fn scale_lookup(label: &str) -> Result<Tfn, FpcsError> {
    LinguisticTerm::parse(label)
        .map(LinguisticTerm::tfn)
        .ok_or_else(|| FpcsError::new(ErrorCode::UnknownTerm, "", format!("unknown linguistic term {label:?}")))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("a uniform grid needs m >= 2 levels, got {0}")]
    TooFewLevels(usize),
    #[error("grid levels must lie in [0, 1], got {0}")]
    OutOfRange(f64),
    #[error("grid levels must be strictly increasing")]
    NotIncreasing,
    #[error("grid must contain both 0 and 1")]
    MissingEndpoint,
}

/// Finite set of α levels `0 = α₁ < … < α_m = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaGrid {
    levels: Vec<f64>,
}

impl AlphaGrid {
    pub fn uniform(m: usize) -> Result<Self, GridError> {
        if m < 2 {
            return Err(GridError::TooFewLevels(m));
        }
        let steps = (m - 1) as f64;
        let levels = (0..m).map(|k| k as f64 / steps).collect();
        Ok(Self { levels })
    }

    pub fn from_levels(levels: Vec<f64>) -> Result<Self, GridError> {
        if let Some(&bad) = levels.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(GridError::OutOfRange(bad));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GridError::NotIncreasing);
        }
        if levels.first() != Some(&0.0) || levels.last() != Some(&1.0) {
            return Err(GridError::MissingEndpoint);
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Largest gap between successive levels, the degree of approximation.
    pub fn mesh(&self) -> f64 {
        self.levels.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Whether every level of `self` also occurs in `other`.
    pub fn is_subset_of(&self, other: &AlphaGrid) -> bool {
        self.levels
            .iter()
            .all(|a| other.levels.iter().any(|b| (a - b).abs() < 1e-12))
    }
}

/// Machine-readable category of an input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Syntax,
    MissingField,
    WrongType,
    UnknownTerm,
    UnknownCriterion,
    DuplicateCriterion,
    TooFewCriteria,
    BestEqualsWorst,
    LengthMismatch,
    BestSelfNotOne,
    WorstSelfNotOne,
    InconsistentBestWorst,
    UnknownChild,
    MissingChild,
    InvalidGrid,
    NotStored,
}

/// Input validation failure, located by a dotted field path such as
/// `children.c2.best_to_others[1]`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{message}", if field_path.is_empty() { String::new() } else { format!("{field_path}: ") })]
pub struct FpcsError {
    pub code: ErrorCode,
    pub field_path: String,
    pub message: String,
}

impl FpcsError {
    pub fn new(code: ErrorCode, field_path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code,
            field_path: field_path.into(),
            message: message.into(),
        }
    }

    fn nested(mut self, prefix: &str) -> Self {
        self.field_path = join_path(prefix, &self.field_path);
        self
    }
}

fn join_path(prefix: &str, rest: &str) -> String {
    match (prefix.is_empty(), rest.is_empty()) {
        (true, _) => rest.to_string(),
        (_, true) => prefix.to_string(),
        _ if rest.starts_with('[') => format!("{prefix}{rest}"),
        _ => format!("{prefix}.{rest}"),
    }
}

/// Fuzzy pairwise comparison system: the best-to-others and
/// others-to-worst judgment vectors over named criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct Fpcs {
    criteria: Vec<String>,
    best: usize,
    worst: usize,
    best_to_others: Vec<LinguisticTerm>,
    others_to_worst: Vec<LinguisticTerm>,
}

/// Wire form of [`Fpcs`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpcsDocument {
    pub criteria: Vec<String>,
    pub best: String,
    pub worst: String,
    pub best_to_others: Vec<LinguisticTerm>,
    pub others_to_worst: Vec<LinguisticTerm>,
}

impl Fpcs {
    pub fn new(
        criteria: Vec<String>,
        best: &str,
        worst: &str,
        best_to_others: Vec<LinguisticTerm>,
        others_to_worst: Vec<LinguisticTerm>,
    ) -> Result<Self, FpcsError> {
        let n = criteria.len();
        if n < 2 {
            return Err(FpcsError::new(
                ErrorCode::TooFewCriteria,
                "criteria",
                format!("at least two criteria are required, got {n}"),
            ));
        }
        let mut seen = HashSet::new();
        for (i, name) in criteria.iter().enumerate() {
            if !seen.insert(name.as_str()) {
                return Err(FpcsError::new(
                    ErrorCode::DuplicateCriterion,
                    format!("criteria[{i}]"),
                    format!("criterion {name:?} appears more than once"),
                ));
            }
        }
        let index_of = |field: &str, name: &str| {
            criteria.iter().position(|c| c == name).ok_or_else(|| {
                FpcsError::new(
                    ErrorCode::UnknownCriterion,
                    field,
                    format!("{name:?} is not one of the listed criteria"),
                )
            })
        };
        let b = index_of("best", best)?;
        let w = index_of("worst", worst)?;
        if b == w {
            return Err(FpcsError::new(
                ErrorCode::BestEqualsWorst,
                "worst",
                "best and worst criteria must differ",
            ));
        }
        for (field, v) in [
            ("best_to_others", &best_to_others),
            ("others_to_worst", &others_to_worst),
        ] {
            if v.len() != n {
                return Err(FpcsError::new(
                    ErrorCode::LengthMismatch,
                    field,
                    format!("expected {n} judgments, got {}", v.len()),
                ));
            }
        }
        if best_to_others[b] != LinguisticTerm::ONE {
            return Err(FpcsError::new(
                ErrorCode::BestSelfNotOne,
                format!("best_to_others[{b}]"),
                "the best criterion compared with itself must be \"1\"",
            ));
        }
        if others_to_worst[w] != LinguisticTerm::ONE {
            return Err(FpcsError::new(
                ErrorCode::WorstSelfNotOne,
                format!("others_to_worst[{w}]"),
                "the worst criterion compared with itself must be \"1\"",
            ));
        }
        if best_to_others[w] != others_to_worst[b] {
            return Err(FpcsError::new(
                ErrorCode::InconsistentBestWorst,
                format!("others_to_worst[{b}]"),
                format!(
                    "best-to-worst judgment differs between vectors: best_to_others[{w}] = \"{}\", others_to_worst[{b}] = \"{}\"",
                    best_to_others[w], others_to_worst[b]
                ),
            ));
        }
        Ok(Self {
            criteria,
            best: b,
            worst: w,
            best_to_others,
            others_to_worst,
        })
    }

    pub fn from_document(doc: FpcsDocument) -> Result<Self, FpcsError> {
        Fpcs::new(
            doc.criteria,
            &doc.best,
            &doc.worst,
            doc.best_to_others,
            doc.others_to_worst,
        )
    }

    pub fn to_document(&self) -> FpcsDocument {
        FpcsDocument {
            criteria: self.criteria.clone(),
            best: self.criteria[self.best].clone(),
            worst: self.criteria[self.worst].clone(),
            best_to_others: self.best_to_others.clone(),
            others_to_worst: self.others_to_worst.clone(),
        }
    }

    /// Parses and validates a JSON value, reporting the offending field path.
    pub fn from_value(value: &Value) -> Result<Self, FpcsError> {
        let obj = as_object(value, "")?;
        let criteria = string_array(obj, "criteria")?;
        let best = string_field(obj, "best")?;
        let worst = string_field(obj, "worst")?;
        let bto = term_array(obj, "best_to_others")?;
        let otw = term_array(obj, "others_to_worst")?;
        Fpcs::new(criteria, &best, &worst, bto, otw)
    }

    pub fn from_json_str(text: &str) -> Result<Self, FpcsError> {
        Fpcs::from_value(&parse_json(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents always serialize")
    }

    pub fn n(&self) -> usize {
        self.criteria.len()
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn best(&self) -> usize {
        self.best
    }

    pub fn worst(&self) -> usize {
        self.worst
    }

    pub fn best_to_others(&self) -> &[LinguisticTerm] {
        &self.best_to_others
    }

    pub fn others_to_worst(&self) -> &[LinguisticTerm] {
        &self.others_to_worst
    }

    /// Best-over-worst judgment.
    pub fn a_bw(&self) -> LinguisticTerm {
        self.best_to_others[self.worst]
    }

    /// Best and worst judged equally important.
    pub fn is_degenerate(&self) -> bool {
        self.a_bw() == LinguisticTerm::ONE
    }

    /// Indices of criteria other than best and worst.
    pub fn middle(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&i| i != self.best && i != self.worst)
    }

    /// α-cut of the stored judgment comparing criterion `i` with `j`.
    /// Only row `best` and column `worst` are stored.
    pub fn judgment_cut(&self, i: usize, j: usize, alpha: f64) -> Result<Interval, FpcsError> {
        let n = self.n();
        if i >= n || j >= n {
            return Err(FpcsError::new(
                ErrorCode::NotStored,
                "",
                format!("index ({i}, {j}) is outside an {n}-criterion system"),
            ));
        }
        let term = if i == self.best {
            self.best_to_others[j]
        } else if j == self.worst {
            self.others_to_worst[i]
        } else {
            return Err(FpcsError::new(
                ErrorCode::NotStored,
                "",
                format!("comparison ({i}, {j}) is not in the best row or worst column"),
            ));
        };
        term.tfn().alpha_cut(alpha).map_err(|e| match e {
            FuzzyError::AlphaOutOfRange(_) => FpcsError::new(ErrorCode::InvalidGrid, "", e.to_string()),
            other => FpcsError::new(ErrorCode::WrongType, "", other.to_string()),
        })
    }

    pub(crate) fn cut_bi(&self, i: usize, alpha: f64) -> Interval {
        self.best_to_others[i].tfn().cut_unchecked(alpha)
    }

    pub(crate) fn cut_iw(&self, i: usize, alpha: f64) -> Interval {
        self.others_to_worst[i].tfn().cut_unchecked(alpha)
    }

    pub(crate) fn cut_bw(&self, alpha: f64) -> Interval {
        debug_assert!(check_alpha(alpha).is_ok());
        self.a_bw().tfn().cut_unchecked(alpha)
    }
}

impl Serialize for Fpcs {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_document().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fpcs {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(d)?;
        Fpcs::from_value(&value).map_err(serde::de::Error::custom)
    }
}

/// Two-level criteria tree: a root system plus one local system per root
/// criterion, in root order.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    pub root: Fpcs,
    pub children: Vec<(String, Fpcs)>,
}

impl Hierarchy {
    pub fn from_value(value: &Value) -> Result<Self, FpcsError> {
        let obj = as_object(value, "")?;
        let root = Fpcs::from_value(required(obj, "root")?).map_err(|e| e.nested("root"))?;
        let children_obj = as_object(required(obj, "children")?, "children")?;
        if let Some(unknown) = children_obj.keys().find(|k| !root.criteria.contains(k)) {
            return Err(FpcsError::new(
                ErrorCode::UnknownChild,
                format!("children.{unknown}"),
                format!("{unknown:?} is not a root criterion"),
            ));
        }
        let mut children = Vec::with_capacity(root.n());
        for name in &root.criteria {
            let path = format!("children.{name}");
            let child = children_obj.get(name).ok_or_else(|| {
                FpcsError::new(
                    ErrorCode::MissingChild,
                    path.clone(),
                    format!("no local comparison system for root criterion {name:?}"),
                )
            })?;
            let fpcs = Fpcs::from_value(child).map_err(|e| e.nested(&path))?;
            children.push((name.clone(), fpcs));
        }
        Ok(Self { root, children })
    }

    pub fn from_json_str(text: &str) -> Result<Self, FpcsError> {
        Hierarchy::from_value(&parse_json(text)?)
    }

    pub fn to_value(&self) -> Value {
        let children: Map<String, Value> = self
            .children
            .iter()
            .map(|(name, f)| {
                (
                    name.clone(),
                    serde_json::to_value(f).expect("documents always serialize"),
                )
            })
            .collect();
        serde_json::json!({ "root": self.root, "children": children })
    }
}

impl Serialize for Hierarchy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_value().serialize(s)
    }
}

/// Either a single comparison system or a hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Single(Fpcs),
    Hierarchy(Hierarchy),
}

impl Problem {
    /// A document with a `root` key is read as a hierarchy.
    pub fn from_value(value: &Value) -> Result<Self, FpcsError> {
        let obj = as_object(value, "")?;
        if obj.contains_key("root") {
            Hierarchy::from_value(value).map(Problem::Hierarchy)
        } else {
            Fpcs::from_value(value).map(Problem::Single)
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, FpcsError> {
        Problem::from_value(&parse_json(text)?)
    }
}

fn parse_json(text: &str) -> Result<Value, FpcsError> {
    serde_json::from_str(text).map_err(|e| FpcsError::new(ErrorCode::Syntax, "", format!("invalid JSON: {e}")))
}

fn as_object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, FpcsError> {
    value
        .as_object()
        .ok_or_else(|| FpcsError::new(ErrorCode::WrongType, path, "expected a JSON object"))
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, FpcsError> {
    obj.get(key)
        .ok_or_else(|| FpcsError::new(ErrorCode::MissingField, key, format!("missing field {key:?}")))
}

fn string_field(obj: &Map<String, Value>, key: &str) -> Result<String, FpcsError> {
    required(obj, key)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| FpcsError::new(ErrorCode::WrongType, key, "expected a string"))
}

fn array_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>, FpcsError> {
    required(obj, key)?
        .as_array()
        .ok_or_else(|| FpcsError::new(ErrorCode::WrongType, key, "expected an array"))
}

fn string_array(obj: &Map<String, Value>, key: &str) -> Result<Vec<String>, FpcsError> {
    array_field(obj, key)?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| FpcsError::new(ErrorCode::WrongType, format!("{key}[{i}]"), "expected a string"))
        })
        .collect()
}

fn term_array(obj: &Map<String, Value>, key: &str) -> Result<Vec<LinguisticTerm>, FpcsError> {
    array_field(obj, key)?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let path = format!("{key}[{i}]");
            let label = v
                .as_str()
                .ok_or_else(|| FpcsError::new(ErrorCode::WrongType, path.clone(), "expected a label \"1\"..\"9\""))?;
            LinguisticTerm::parse(label).ok_or_else(|| {
                FpcsError::new(
                    ErrorCode::UnknownTerm,
                    path,
                    format!("unknown linguistic term {label:?}"),
                )
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    fn terms(labels: &[u8]) -> Vec<LinguisticTerm> {
        labels.iter().map(|&l| LinguisticTerm::new(l).unwrap()).collect()
    }

    fn example1() -> Value {
        json!({
            "criteria": ["c1", "c2", "c3", "c4", "c5"],
            "best": "c2",
            "worst": "c5",
            "best_to_others": ["2", "1", "4", "2", "8"],
            "others_to_worst": ["3", "8", "5", "4", "1"]
        })
    }

    #[test]
    fn scale_examples() {
        assert_eq!(scale_lookup("1").unwrap(), Tfn::new(1.0, 1.0, 1.0).unwrap());
        assert_eq!(scale_lookup("3").unwrap(), Tfn::new(2.0, 3.0, 4.0).unwrap());
        assert_eq!(scale_lookup("9").unwrap(), Tfn::new(9.0, 9.0, 9.0).unwrap());
        assert_eq!(scale_lookup("10").unwrap_err().code, ErrorCode::UnknownTerm);
        assert!(scale_lookup("0").is_err());
        assert_eq!(LinguisticTerm::all().count(), 9);
    }

    #[test]
    fn uniform_grid_examples() {
        assert_eq!(AlphaGrid::uniform(2).unwrap().levels(), &[0.0, 1.0]);
        assert_eq!(AlphaGrid::uniform(5).unwrap().levels(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(AlphaGrid::uniform(17).unwrap().mesh(), 0.0625);
        assert_eq!(AlphaGrid::uniform(129).unwrap().mesh(), 0.0078125);
        assert_eq!(AlphaGrid::uniform(1), Err(GridError::TooFewLevels(1)));
        assert!(AlphaGrid::uniform(2)
            .unwrap()
            .is_subset_of(&AlphaGrid::uniform(17).unwrap()));
    }

    #[test]
    fn explicit_grid_validation() {
        assert!(AlphaGrid::from_levels(vec![0.0, 0.3, 1.0]).is_ok());
        assert_eq!(AlphaGrid::from_levels(vec![0.0, 0.5]), Err(GridError::MissingEndpoint));
        assert_eq!(
            AlphaGrid::from_levels(vec![0.0, 0.5, 0.5, 1.0]),
            Err(GridError::NotIncreasing)
        );
        assert_eq!(AlphaGrid::from_levels(vec![0.0, 1.5]), Err(GridError::OutOfRange(1.5)));
    }

    #[test]
    fn parses_example1() {
        let f = Fpcs::from_value(&example1()).unwrap();
        assert_eq!(f.n(), 5);
        assert_eq!((f.best(), f.worst()), (1, 4));
        assert_eq!(f.a_bw(), LinguisticTerm::new(8).unwrap());
        assert_eq!(f.middle().collect::<Vec<_>>(), vec![0, 2, 3]);
    }

    #[test]
    fn judgment_cuts() {
        let f = Fpcs::from_value(&example1()).unwrap();
        assert_eq!(f.judgment_cut(1, 4, 0.0).unwrap(), Interval::new(7.0, 9.0).unwrap());
        assert_eq!(f.judgment_cut(1, 4, 1.0).unwrap(), Interval::point(8.0));
        assert_eq!(f.judgment_cut(0, 4, 0.5).unwrap(), Interval::new(2.5, 3.5).unwrap());
        assert_eq!(f.judgment_cut(0, 2, 0.5).unwrap_err().code, ErrorCode::NotStored);
        let nine = Fpcs::new(vec!["a".into(), "b".into()], "a", "b", terms(&[1, 9]), terms(&[9, 1])).unwrap();
        assert_eq!(nine.judgment_cut(0, 1, 0.5).unwrap(), Interval::point(9.0));
    }

    #[test]
    fn minimal_system() {
        let doc = json!({"criteria": ["a", "b"], "best": "a", "worst": "b",
                         "best_to_others": ["1", "3"], "others_to_worst": ["3", "1"]});
        let f = Fpcs::from_value(&doc).unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.middle().count(), 0);
    }

    fn error_for(mutate: impl FnOnce(&mut Value)) -> FpcsError {
        let mut doc = example1();
        mutate(&mut doc);
        Fpcs::from_value(&doc).unwrap_err()
    }

    #[test]
    fn validation_errors_carry_paths() {
        let e = error_for(|d| {
            d.as_object_mut().unwrap().remove("worst");
        });
        assert_eq!((e.code, e.field_path.as_str()), (ErrorCode::MissingField, "worst"));

        let e = error_for(|d| d["best"] = json!("c9"));
        assert_eq!((e.code, e.field_path.as_str()), (ErrorCode::UnknownCriterion, "best"));

        let e = error_for(|d| d["best_to_others"] = json!(["2", "1", "4", "2"]));
        assert_eq!(
            (e.code, e.field_path.as_str()),
            (ErrorCode::LengthMismatch, "best_to_others")
        );

        let e = error_for(|d| d["others_to_worst"][1] = json!("7"));
        assert_eq!(
            (e.code, e.field_path.as_str()),
            (ErrorCode::InconsistentBestWorst, "others_to_worst[1]")
        );

        let e = error_for(|d| d["best_to_others"][1] = json!("2"));
        assert_eq!(
            (e.code, e.field_path.as_str()),
            (ErrorCode::BestSelfNotOne, "best_to_others[1]")
        );

        let e = error_for(|d| d["others_to_worst"][4] = json!("2"));
        assert_eq!(e.code, ErrorCode::WorstSelfNotOne);

        let e = error_for(|d| d["best_to_others"][2] = json!("x"));
        assert_eq!(
            (e.code, e.field_path.as_str()),
            (ErrorCode::UnknownTerm, "best_to_others[2]")
        );

        let e = error_for(|d| d["best_to_others"][2] = json!(4));
        assert_eq!(e.code, ErrorCode::WrongType);

        let e = error_for(|d| d["worst"] = json!("c2"));
        assert_eq!(e.code, ErrorCode::BestEqualsWorst);

        let e = error_for(|d| d["criteria"][0] = json!("c2"));
        assert_eq!(e.code, ErrorCode::DuplicateCriterion);

        assert_eq!(Fpcs::from_json_str("{").unwrap_err().code, ErrorCode::Syntax);
    }

    #[test]
    fn round_trip() {
        let f = Fpcs::from_value(&example1()).unwrap();
        assert_eq!(serde_json::to_value(&f).unwrap(), example1());
        let back: Fpcs = serde_json::from_str(&f.to_json_string()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn degenerate_system_is_accepted() {
        let doc = json!({"criteria": ["a", "b"], "best": "a", "worst": "b",
                         "best_to_others": ["1", "1"], "others_to_worst": ["1", "1"]});
        assert!(Fpcs::from_value(&doc).unwrap().is_degenerate());
    }

    #[test]
    fn hierarchy_paths() {
        let child = json!({"criteria": ["x", "y"], "best": "x", "worst": "y",
                           "best_to_others": ["1", "2"], "others_to_worst": ["2", "1"]});
        let root = json!({"criteria": ["p", "q"], "best": "p", "worst": "q",
                          "best_to_others": ["1", "3"], "others_to_worst": ["3", "1"]});
        let ok = json!({"root": root, "children": {"q": child, "p": child}});
        let h = Hierarchy::from_value(&ok).unwrap();
        assert_eq!(h.children[0].0, "p");
        assert!(matches!(Problem::from_value(&ok).unwrap(), Problem::Hierarchy(_)));

        let mut bad_child = child.clone();
        bad_child["best"] = json!("z");
        let e = Hierarchy::from_value(&json!({"root": root, "children": {"p": bad_child, "q": child}})).unwrap_err();
        assert_eq!(e.field_path, "children.p.best");

        let e = Hierarchy::from_value(&json!({"root": root, "children": {"p": child}})).unwrap_err();
        assert_eq!((e.code, e.field_path.as_str()), (ErrorCode::MissingChild, "children.q"));

        let e = Hierarchy::from_value(&json!({"root": root, "children": {"p": child, "q": child, "r": child}}))
            .unwrap_err();
        assert_eq!(e.code, ErrorCode::UnknownChild);
    }

    proptest! {
        #[test]
        fn scale_cuts_are_ordered_and_nested(level in 1u8..=9, a1 in 0.0..=1.0f64, a2 in 0.0..=1.0f64) {
            let t = LinguisticTerm::new(level).unwrap().tfn();
            let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
            let outer = t.alpha_cut(lo).unwrap();
            let inner = t.alpha_cut(hi).unwrap();
            prop_assert!(outer.lo <= outer.hi && inner.lo <= inner.hi);
            prop_assert!(outer.contains_interval(&inner, 1e-12));
            // Endpoints move at most at unit speed in α.
            prop_assert!(inner.lo - outer.lo <= hi - lo + 1e-12);
            prop_assert!(outer.hi - inner.hi <= hi - lo + 1e-12);
        }
    }
}
