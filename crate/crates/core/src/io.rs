//! Text file formats: kernel specs and measures (JSON), word lists, and trace CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::capacity::capacity;
use crate::enumeration::{sandwich_from_trace, DynamicWeightTrace, GoodEnumeration};
use crate::error::{Error, Result};
use crate::kernel::{Kernel, KernelKind};
use crate::measure::{Node, Tail, TrieMeasure};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::word::{Alphabet, EventuallyPeriodic, PrefixFreeSet, Word};

/// A rational written as `"p/q"`, `"p"`, or a bare JSON integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Integer(i64),
}

impl RationalText {
    fn parse(&self) -> Result<Rational> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Integer(n) => Ok(int(*n)),
        }
    }
}

fn default_alphabet() -> usize {
    2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum KernelSpec {
    Geometric {
        ratio: RationalText,
        #[serde(default = "default_alphabet")]
        alphabet: usize,
    },
    Polynomial {
        degree: u32,
        #[serde(default = "default_alphabet")]
        alphabet: usize,
    },
    Table {
        values: Vec<RationalText>,
        #[serde(default = "default_alphabet")]
        alphabet: usize,
    },
    Shift {
        offset: usize,
        base: Box<KernelSpec>,
    },
}

impl KernelSpec {
    fn build(&self) -> Result<Kernel> {
        match self {
            KernelSpec::Geometric { ratio, alphabet } => Kernel::geometric(ratio.parse()?, Alphabet::new(*alphabet)?),
            KernelSpec::Polynomial { degree, alphabet } => Ok(Kernel::polynomial(*degree, Alphabet::new(*alphabet)?)),
            KernelSpec::Table { values, alphabet } => Kernel::table(
                values.iter().map(RationalText::parse).collect::<Result<_>>()?,
                Alphabet::new(*alphabet)?,
            ),
            KernelSpec::Shift { offset, base } => Ok(Kernel::shift(base.build()?, *offset)),
        }
    }

    fn of(kernel: &Kernel) -> KernelSpec {
        let alphabet = kernel.alphabet().size();
        match kernel.kind() {
            KernelKind::Geometric { ratio } => KernelSpec::Geometric {
                ratio: RationalText::Text(format_rational(ratio)),
                alphabet,
            },
            KernelKind::Polynomial { degree } => KernelSpec::Polynomial {
                degree: *degree,
                alphabet,
            },
            KernelKind::Table { values } => KernelSpec::Table {
                values: values.iter().map(|v| RationalText::Text(format_rational(v))).collect(),
                alphabet,
            },
            KernelKind::Shift { base, offset } => KernelSpec::Shift {
                offset: *offset,
                base: Box::new(KernelSpec::of(base)),
            },
        }
    }
}

pub fn parse_kernel(text: &str) -> Result<Kernel> {
    let spec: KernelSpec = serde_json::from_str(text).map_err(|e| Error::Parse(format!("kernel: {e}")))?;
    spec.build()
}

pub fn kernel_to_json(kernel: &Kernel) -> String {
    serde_json::to_string(&KernelSpec::of(kernel)).expect("kernel spec serializes")
}

/// Parses a measure file. The root may carry `"alphabet"` (default 2).
pub fn parse_measure(text: &str) -> Result<TrieMeasure> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("measure: {e}")))?;
    let alphabet = match value.get("alphabet") {
        None => Alphabet::BINARY,
        Some(v) => Alphabet::new(
            v.as_u64()
                .ok_or_else(|| Error::Parse("measure.alphabet: expected an integer".into()))? as usize,
        )?,
    };
    let root = parse_node(&value, alphabet, "measure", true)?;
    TrieMeasure::from_root(alphabet, root)
}

fn parse_node(value: &Value, alphabet: Alphabet, at: &str, is_root: bool) -> Result<Node> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse(format!("{at}: expected an object")))?;
    for key in obj.keys() {
        let known = matches!(key.as_str(), "mass" | "children" | "tail") || (is_root && key == "alphabet");
        if !known {
            return Err(Error::Parse(format!("{at}: unknown field {key:?}")));
        }
    }
    let mass = match obj.get("mass") {
        Some(Value::String(s)) => parse_rational(s).map_err(|e| Error::Parse(format!("{at}.mass: {e}")))?,
        Some(Value::Number(n)) if n.is_i64() => int(n.as_i64().unwrap()),
        Some(_) => return Err(Error::Parse(format!("{at}.mass: expected a rational string"))),
        None => return Err(Error::Parse(format!("{at}: missing field \"mass\""))),
    };
    let tail = match obj.get("tail") {
        None => None,
        Some(Value::String(s)) if s == "uniform" => Some(Tail::Uniform),
        Some(Value::Object(t)) => {
            let point = t
                .get("point")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::Parse(format!("{at}.tail: expected {{\"point\": {{...}}}}")))?;
            let field = |name: &str| -> Result<&str> {
                point
                    .get(name)
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse(format!("{at}.tail.point.{name}: expected a digit string")))
            };
            let head = field("head")?;
            let period = field("period")?;
            let head = if head.is_empty() { Word::empty() } else { Word::parse(head, alphabet)? };
            if period.is_empty() {
                return Err(Error::Parse(format!("{at}.tail.point.period: must be nonempty")));
            }
            Some(Tail::Point(EventuallyPeriodic::new(head, Word::parse(period, alphabet)?)?))
        }
        Some(_) => return Err(Error::Parse(format!("{at}.tail: expected \"uniform\" or a point tail"))),
    };
    match obj.get("children") {
        Some(Value::Object(children)) if !children.is_empty() => {
            if matches!(tail, Some(Tail::Point(_))) {
                return Err(Error::Parse(format!("{at}: a node with children cannot carry a point tail")));
            }
            let mut nodes = vec![Node::zero(); alphabet.size()];
            for (key, child) in children {
                let symbol = Word::parse(key, alphabet)
                    .ok()
                    .filter(|w| w.len() == 1)
                    .ok_or_else(|| Error::Parse(format!("{at}.children: bad child key {key:?}")))?
                    .symbols()[0] as usize;
                nodes[symbol] = parse_node(child, alphabet, &format!("{at}.children.{key}"), false)?;
            }
            Ok(Node::Branch { mass, children: nodes })
        }
        Some(Value::Object(_)) | None => Ok(match tail.unwrap_or(Tail::Uniform) {
            Tail::Uniform => Node::uniform(mass),
            Tail::Point(x) => Node::point(mass, x),
        }),
        Some(_) => Err(Error::Parse(format!("{at}.children: expected an object"))),
    }
}

/// Serializes a measure; zero-mass uniform children are omitted.
pub fn measure_to_json(mu: &TrieMeasure) -> String {
    let mut root = node_to_json(mu.root());
    if mu.alphabet() != Alphabet::BINARY {
        root.as_object_mut()
            .unwrap()
            .insert("alphabet".into(), json!(mu.alphabet().size()));
    }
    serde_json::to_string_pretty(&root).expect("measure serializes")
}

fn node_to_json(node: &Node) -> Value {
    let mut obj = Map::new();
    obj.insert("mass".into(), json!(format_rational(node.mass())));
    match node {
        Node::Leaf { tail: Tail::Uniform, .. } => {
            obj.insert("tail".into(), json!("uniform"));
        }
        Node::Leaf { tail: Tail::Point(x), .. } => {
            let text = x.to_text();
            let (head, period) = text.split_once(':').unwrap();
            obj.insert("tail".into(), json!({"point": {"head": head, "period": period}}));
        }
        Node::Branch { children, .. } => {
            let map: BTreeMap<String, Value> = children
                .iter()
                .enumerate()
                .filter(|(_, c)| !(c.mass().is_zero() && matches!(c, Node::Leaf { .. })))
                .map(|(i, c)| (std::char::from_digit(i as u32, 36).unwrap().to_string(), node_to_json(c)))
                .collect();
            obj.insert("children".into(), json!(map));
        }
    }
    Value::Object(obj)
}

/// Words one per line, in order; blank lines and `#` comments are skipped.
pub fn parse_word_list(text: &str, alphabet: Alphabet) -> Result<Vec<Word>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| Word::parse(l, alphabet).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))))
        .collect()
}

pub fn parse_set(text: &str, alphabet: Alphabet) -> Result<PrefixFreeSet> {
    PrefixFreeSet::new(alphabet, parse_word_list(text, alphabet)?)
}

pub fn parse_enumeration(text: &str, alphabet: Alphabet) -> Result<GoodEnumeration> {
    GoodEnumeration::new(alphabet, parse_word_list(text, alphabet)?)
}

/// Level files of a Cf-test: every file whose stem starts with a number `n` is level `n`.
/// Levels must be numbered `0..count` without gaps.
pub fn level_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut levels: BTreeMap<usize, PathBuf> = BTreeMap::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::Parse(e.to_string()))?.path();
        if !path.is_file() {
            continue;
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        let digits: String = stem.chars().take_while(char::is_ascii_digit).collect();
        let Ok(n) = digits.parse::<usize>() else { continue };
        if let Some(prev) = levels.insert(n, path.clone()) {
            return Err(Error::Parse(format!(
                "level {n} given twice: {} and {}",
                prev.display(),
                path.display()
            )));
        }
    }
    for (expected, n) in levels.keys().enumerate() {
        if *n != expected {
            return Err(Error::Parse(format!("level files skip level {expected}")));
        }
    }
    Ok(levels.into_values().collect())
}

pub const TRACE_HEADER: &str = "stage,word,increment,ww,capacity,bound_A,ratio";

/// The trace as CSV: one row per stage with the capacity of the stage set `S_t`, then a
/// `summary` row whose word column is the sandwich verdict (`PASS` or `FAIL`).
pub fn trace_to_csv(kernel: &Kernel, enumeration: &GoodEnumeration, trace: &DynamicWeightTrace) -> Result<String> {
    let a = format_rational(&trace.bound_constant);
    let ratio_text = |ww: &Rational, c: &Rational| {
        if c.is_zero() { String::new() } else { format_rational(&(ww / c)) }
    };
    let mut out = String::new();
    writeln!(out, "{TRACE_HEADER}").unwrap();
    for s in &trace.stages {
        let c = capacity(kernel, &enumeration.prefix(s.stage).set(), trace.shift)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.stage,
            s.word,
            format_rational(&s.increment),
            format_rational(&s.ww),
            format_rational(&c),
            a,
            ratio_text(&s.ww, &c)
        )
        .unwrap();
    }
    let report = sandwich_from_trace(kernel, trace)?;
    writeln!(
        out,
        "summary,{},,{},{},{},{}",
        if report.holds() { "PASS" } else { "FAIL" },
        format_rational(&report.ww),
        format_rational(&report.capacity),
        a,
        ratio_text(&report.ww, &report.capacity)
    )
    .unwrap();
    Ok(out)
}

/// Reads the `CANTOR_POTENTIAL_MAX_DEPTH` override for the oracle's depth cap.
pub fn oracle_max_depth_from_env() -> Result<usize> {
    match std::env::var("CANTOR_POTENTIAL_MAX_DEPTH") {
        Err(_) => Ok(crate::capacity::DEFAULT_ORACLE_MAX_DEPTH),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("CANTOR_POTENTIAL_MAX_DEPTH={v:?} is not a nonnegative integer"))),
    }
}

/// Lossy display helper for reports.
pub fn approx(r: &Rational) -> f64 {
    crate::rational::to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::dynamic_weight;
    use crate::rational::{int, ratio};

    #[test]
    fn kernel_files() {
        let k = parse_kernel(r#"{"kind":"geometric","ratio":"3/2","alphabet":2}"#).unwrap();
        assert_eq!(k, Kernel::geometric(ratio(3, 2), Alphabet::BINARY).unwrap());
        let p = parse_kernel(r#"{"kind":"polynomial","degree":1,"alphabet":2}"#).unwrap();
        assert_eq!(p.norm(), int(2));
        let t = parse_kernel(r#"{"kind":"table","values":["1","1/2"],"alphabet":2}"#).unwrap();
        assert_eq!(t.eval(1), ratio(1, 2));
        let s = parse_kernel(r#"{"kind":"shift","offset":1,"base":{"kind":"geometric","ratio":"3/2"}}"#).unwrap();
        assert_eq!(s.eval(0), ratio(3, 2));
        assert_eq!(parse_kernel(&kernel_to_json(&s)).unwrap(), s);
        assert!(parse_kernel(r#"{"kind":"geometric","ratio":"5/2"}"#).is_err());
        assert!(parse_kernel(r#"{"kind":"cubic"}"#).is_err());
        assert!(parse_kernel(r#"{"kind":"polynomial","degree":1,"colour":2}"#).is_err());
    }

    #[test]
    fn measure_files() {
        let text = r#"{"mass":"1/2","children":{"0":{"mass":"1/3","tail":"uniform"},
                       "1":{"mass":"1/6","tail":{"point":{"head":"011","period":"10"}}}}}"#;
        let mu = parse_measure(text).unwrap();
        assert_eq!(mu.cylinder_mass(&Word::parse("1011", Alphabet::BINARY).unwrap()), ratio(1, 6));
        assert_eq!(parse_measure(&measure_to_json(&mu)).unwrap(), mu);
        let bad = r#"{"mass":"1","children":{"0":{"mass":"1/3"}}}"#;
        assert!(matches!(parse_measure(bad), Err(Error::InvalidMeasure(_))));
        let bad_key = r#"{"mass":"1","children":{"7":{"mass":"1"}}}"#;
        assert!(matches!(parse_measure(bad_key), Err(Error::Parse(_))));
        let ternary = r#"{"alphabet":3,"mass":"1","children":{"2":{"mass":"1"}}}"#;
        let mu3 = parse_measure(ternary).unwrap();
        assert_eq!(parse_measure(&measure_to_json(&mu3)).unwrap(), mu3);
    }

    #[test]
    fn word_lists() {
        let b = Alphabet::BINARY;
        let words = parse_word_list("0\n\n# comment\n10\n-\n", b).unwrap();
        assert_eq!(words.len(), 3);
        assert!(words[2].is_empty());
        let err = parse_word_list("0\n12\n", b).unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(parse_set("0\n01\n", b).is_err());
    }

    #[test]
    fn trace_csv_layout() {
        let b = Alphabet::BINARY;
        let k = Kernel::geometric(ratio(3, 2), b).unwrap();
        let e = parse_enumeration("00\n01\n", b).unwrap();
        let trace = dynamic_weight(&k, &e, 0).unwrap();
        let csv = trace_to_csv(&k, &e, &trace).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines[1], "1,00,2/23,2/23,2/23,7/3,1");
        assert_eq!(lines[2], "2,01,7/99,359/2277,1/7,7/3,2513/2277");
        assert_eq!(lines[3], "summary,PASS,,359/2277,1/7,7/3,2513/2277");
    }
}
