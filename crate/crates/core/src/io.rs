//! JSON and TSV encodings. Bit strings put x_1 first.

use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{multiplication_table, GradedAlgebra, TwistingTable};
use crate::error::{Error, Result};
use crate::forms::CubicForm;
use crate::gf2::{GF2Matrix, Z2Vec};

/// `{"n": 5, "cubic": [[1,2,3]], "quadratic": [[2,3]], "linear": [1]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    #[serde(default)]
    pub cubic: Vec<[usize; 3]>,
    #[serde(default)]
    pub quadratic: Vec<[usize; 2]>,
    #[serde(default)]
    pub linear: Vec<usize>,
}

impl From<&CubicForm> for FormJson {
    fn from(f: &CubicForm) -> Self {
        FormJson {
            n: f.dim(),
            cubic: f.cubic(),
            quadratic: f.quadratic(),
            linear: f.linear(),
        }
    }
}

impl FormJson {
    pub fn to_form(&self) -> Result<CubicForm> {
        CubicForm::from_parts(self.n, &self.cubic, &self.quadratic, &self.linear)
    }
}

/// `{"n": 3, "rows": ["110", "010", "001"]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<String>,
}

impl From<&GF2Matrix> for MatrixJson {
    fn from(g: &GF2Matrix) -> Self {
        MatrixJson {
            n: g.dim(),
            rows: g.row_strings(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<GF2Matrix> {
        let g = GF2Matrix::parse_rows(&self.rows)?;
        if g.dim() != self.n {
            return Err(Error::DimensionMismatch(self.n, g.dim()));
        }
        Ok(g)
    }
}

pub(crate) fn serialize_matrix<S: Serializer>(g: &GF2Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    MatrixJson::from(g).serialize(s)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn form_to_json(f: &CubicForm) -> String {
    serde_json::to_string(&FormJson::from(f)).expect("form JSON")
}

pub fn form_from_json(text: &str) -> Result<CubicForm> {
    parse_json::<FormJson>(text)?.to_form()
}

pub fn matrix_to_json(g: &GF2Matrix) -> String {
    serde_json::to_string(&MatrixJson::from(g)).expect("matrix JSON")
}

pub fn matrix_from_json(text: &str) -> Result<GF2Matrix> {
    parse_json::<MatrixJson>(text)?.to_matrix()
}

/// Position of x in the binary-counter order with x_1 most significant.
fn counter_order(n: usize, c: u32) -> u32 {
    (0..n).fold(0, |acc, i| acc | (c >> (n - 1 - i) & 1) << i)
}

/// `{"n": 3, "rows": ["00000000", ..]}`: row r and column c hold f(x, y) where
/// x and y are the r-th and c-th bit strings in counting order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub n: usize,
    pub rows: Vec<String>,
}

pub fn table_to_json(f: &TwistingTable) -> String {
    let n = f.dim();
    let rows = (0..1u32 << n)
        .map(|r| {
            let x = counter_order(n, r);
            (0..1u32 << n)
                .map(|c| {
                    if f.get_bits(x, counter_order(n, c)) == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect()
        })
        .collect();
    serde_json::to_string(&TableJson { n, rows }).expect("table JSON")
}

pub fn table_from_json(text: &str) -> Result<TwistingTable> {
    let t: TableJson = parse_json(text)?;
    let size = 1usize << t.n;
    if t.rows.len() != size || t.rows.iter().any(|r| r.len() != size) {
        return Err(Error::Parse(format!(
            "table for n = {} needs {size} rows of {size} bits",
            t.n
        )));
    }
    let bits: Vec<Vec<u8>> = t
        .rows
        .iter()
        .map(|r| r.bytes().map(|b| u8::from(b == b'1')).collect())
        .collect();
    if t.rows.iter().any(|r| r.bytes().any(|b| b != b'0' && b != b'1')) {
        return Err(Error::Parse("table rows must be bit strings".into()));
    }
    let n = t.n;
    TwistingTable::from_fn(n, |x, y| {
        bits[counter_order(n, x) as usize][counter_order(n, y) as usize]
    })
}

/// One line per (x, y): `x<TAB>y<TAB>[-]product`.
pub fn table_tsv(alg: &GradedAlgebra) -> Result<String> {
    let mut out = String::new();
    for e in multiplication_table(alg)? {
        let sign = if e.sign < 0 { "-" } else { "" };
        out.push_str(&format!("{}\t{}\t{sign}{}\n", e.x, e.y, e.product));
    }
    Ok(out)
}

pub fn parse_vector(s: &str) -> Result<Z2Vec> {
    Z2Vec::parse(s)
}
