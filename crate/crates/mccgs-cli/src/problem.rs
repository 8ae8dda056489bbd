//! Problem-file parsing and validation.
//!
//! A problem is a JSON object naming the main variables and parameters,
//! choosing a term order for each block, listing the input polynomials, and
//! optionally restricting the parameter space through null / non-null side
//! conditions. Options may ride along in the file and can be overridden by
//! environment variables and command-line flags, in that order of
//! precedence.

use std::sync::Arc;

use serde_json::Value;

use mccgs::{parse_poly, OrderKind, Poly, TermOrder, VarSpace};

/// A validated problem, ready for the pipeline.
pub struct Problem {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub order_x_name: String,
    pub order_a_name: String,
    pub space: Arc<VarSpace>,
    /// Main order: the variable block first, then the parameter block.
    pub order: Arc<TermOrder>,
    /// Parameter-leading order used for segment ideals.
    pub order_a: Arc<TermOrder>,
    pub polys: Vec<Poly>,
    pub null: Vec<Poly>,
    pub notnull: Vec<Poly>,
    pub options: FileOptions,
}

/// Options carried inside the problem file; all optional.
#[derive(Default, Clone, Copy)]
pub struct FileOptions {
    pub max_factor_degree: Option<u32>,
    pub oracle_samples: Option<u64>,
    pub seed: Option<u64>,
}

pub fn parse_problem(text: &str) -> Result<Problem, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let obj = v.as_object().ok_or("the problem must be a JSON object")?;

    const KNOWN: [&str; 8] =
        ["vars", "params", "order_x", "order_a", "polys", "null", "notnull", "options"];
    for key in obj.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(format!("unknown field \"{key}\" (expected one of {KNOWN:?})"));
        }
    }

    let vars = name_list(obj.get("vars"), "vars")?;
    let params = name_list(obj.get("params"), "params")?;
    if vars.is_empty() {
        return Err("vars: at least one main variable is required".into());
    }
    for p in &params {
        if vars.contains(p) {
            return Err(format!("params: \"{p}\" is also declared in vars"));
        }
    }

    let order_x_name = order_name(obj.get("order_x"), "order_x")?;
    let order_a_name = order_name(obj.get("order_a"), "order_a")?;
    let kx = kind_of(&order_x_name);
    let ka = kind_of(&order_a_name);

    let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let param_refs: Vec<&str> = params.iter().map(String::as_str).collect();
    let space = VarSpace::new(&var_refs, &param_refs);
    let order = TermOrder::two_block(kx, vars.len(), ka, params.len());
    let order_a = TermOrder::param_leading(ka, vars.len(), params.len());

    let polys = poly_list(obj.get("polys"), "polys", &space, &order, false)?;
    if polys.is_empty() && obj.get("polys").is_none() {
        return Err("polys: required field is missing".into());
    }
    let null = poly_list(obj.get("null"), "null", &space, &order_a, true)?;
    let notnull = poly_list(obj.get("notnull"), "notnull", &space, &order_a, true)?;

    let options = match obj.get("options") {
        None => FileOptions::default(),
        Some(o) => parse_options(o)?,
    };

    Ok(Problem {
        vars,
        params,
        order_x_name,
        order_a_name,
        space,
        order,
        order_a,
        polys,
        null,
        notnull,
        options,
    })
}

fn name_list(v: Option<&Value>, field: &str) -> Result<Vec<String>, String> {
    let arr = v
        .ok_or_else(|| format!("{field}: required field is missing"))?
        .as_array()
        .ok_or_else(|| format!("{field}: expected an array of names"))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, item) in arr.iter().enumerate() {
        let s = item
            .as_str()
            .ok_or_else(|| format!("{field}[{i}]: expected a string"))?;
        if s.is_empty() || !s.chars().next().unwrap().is_ascii_alphabetic() {
            return Err(format!("{field}[{i}]: \"{s}\" is not a valid name"));
        }
        if !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(format!("{field}[{i}]: \"{s}\" is not a valid name"));
        }
        if out.contains(&s.to_string()) {
            return Err(format!("{field}[{i}]: \"{s}\" is declared twice"));
        }
        out.push(s.to_string());
    }
    Ok(out)
}

fn order_name(v: Option<&Value>, field: &str) -> Result<String, String> {
    let s = v
        .ok_or_else(|| format!("{field}: required field is missing"))?
        .as_str()
        .ok_or_else(|| format!("{field}: expected \"lex\" or \"grevlex\""))?;
    match s {
        "lex" | "grevlex" => Ok(s.to_string()),
        other => Err(format!("{field}: unknown order \"{other}\" (expected \"lex\" or \"grevlex\")")),
    }
}

fn kind_of(name: &str) -> OrderKind {
    match name {
        "lex" => OrderKind::Lex,
        _ => OrderKind::Grevlex,
    }
}

fn poly_list(
    v: Option<&Value>,
    field: &str,
    space: &Arc<VarSpace>,
    order: &Arc<TermOrder>,
    param_only: bool,
) -> Result<Vec<Poly>, String> {
    let Some(v) = v else { return Ok(vec![]) };
    let arr = v
        .as_array()
        .ok_or_else(|| format!("{field}: expected an array of polynomial strings"))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, item) in arr.iter().enumerate() {
        let s = item
            .as_str()
            .ok_or_else(|| format!("{field}[{i}]: expected a string"))?;
        let p = parse_poly(s, space, order).map_err(|e| format!("{field}[{i}]: {e}"))?;
        if param_only && !p.is_param_only() {
            return Err(format!(
                "{field}[{i}]: \"{s}\" involves a main variable; side conditions must use parameters only"
            ));
        }
        out.push(p);
    }
    Ok(out)
}

fn parse_options(v: &Value) -> Result<FileOptions, String> {
    let obj = v.as_object().ok_or("options: expected an object")?;
    const KNOWN: [&str; 3] = ["max-factor-degree", "oracle-samples", "seed"];
    for key in obj.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(format!("options: unknown field \"{key}\" (expected one of {KNOWN:?})"));
        }
    }
    let uint = |name: &str| -> Result<Option<u64>, String> {
        match obj.get(name) {
            None => Ok(None),
            Some(x) => x
                .as_u64()
                .map(Some)
                .ok_or_else(|| format!("options.{name}: expected a nonnegative integer")),
        }
    };
    let degree = match uint("max-factor-degree")? {
        None => None,
        Some(d) if d >= 1 && d <= 64 => Some(d as u32),
        Some(d) => return Err(format!("options.max-factor-degree: {d} is out of range 1..=64")),
    };
    Ok(FileOptions {
        max_factor_degree: degree,
        oracle_samples: uint("oracle-samples")?,
        seed: uint("seed")?,
    })
}
