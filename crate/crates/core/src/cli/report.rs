//! The JSON report document.
//!
//! Every float is written in scientific notation with 17 significant digits, so values
//! survive a round trip through any conforming JSON reader.

use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Serializer, Value};
use sha2::{Digest, Sha256};

use crate::numcore::{is_real, ComplexMatrix, ToleranceProfile};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(role: &str, path: &Path, bytes: &[u8]) -> Self {
        Self {
            role: role.to_owned(),
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub tolerance: ToleranceProfile,
    pub result: Value,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<InputDigest>, tolerance: ToleranceProfile) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_owned(),
            inputs,
            tolerance,
            result: Value::Null,
            verdicts: Vec::new(),
        }
    }

    pub fn verdict(&mut self, name: &str, value: bool) {
        self.verdicts.push(Verdict {
            name: name.to_owned(),
            value,
        });
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pretty-printed JSON with every float at 17 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FloatFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("report values are always serializable");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

struct FloatFormatter(PrettyFormatter<'static>);

impl Formatter for FloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// `{rows, cols, re, im}` with row-major nested arrays; `im` is omitted for real matrices.
pub fn matrix_value(m: &ComplexMatrix) -> Value {
    let rows = |part: fn(&num_complex::Complex64) -> f64| -> Value {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| part(&m[(i, j)])).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .into()
    };
    let mut obj = serde_json::Map::new();
    obj.insert("rows".into(), m.nrows().into());
    obj.insert("cols".into(), m.ncols().into());
    obj.insert("re".into(), rows(|z| z.re));
    if !is_real(m) {
        obj.insert("im".into(), rows(|z| z.im));
    }
    Value::Object(obj)
}

/// A float as a JSON value; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
