//! Text document formats.
//!
//! Every document is JSON. Matrices are `{"rows", "cols", "data"}` with
//! `data` a row-major list of `[re, im]` pairs; maps are
//! `{"dim_in", "dim_out", "choi"}` with `choi` a matrix document. Writers
//! emit every float with 17 significant digits so documents re-parse to
//! bit-identical values.

use std::io;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::error::{Error, Result};
use crate::matcore::{c, is_finite, Matrix};
use crate::posmaps::MapRep;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&Matrix> for MatrixDoc {
    fn from(a: &Matrix) -> Self {
        let data = (0..a.nrows())
            .flat_map(|i| (0..a.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| [a[(i, j)].re, a[(i, j)].im])
            .collect();
        Self {
            rows: a.nrows(),
            cols: a.ncols(),
            data,
        }
    }
}

impl TryFrom<&MatrixDoc> for Matrix {
    type Error = Error;

    fn try_from(doc: &MatrixDoc) -> Result<Matrix> {
        if doc.data.len() != doc.rows * doc.cols {
            return Err(Error::Parse(format!(
                "matrix declares {}×{} but carries {} entries",
                doc.rows,
                doc.cols,
                doc.data.len()
            )));
        }
        let m = Matrix::from_row_iterator(
            doc.rows,
            doc.cols,
            doc.data.iter().map(|&[re, im]| c(re, im)),
        );
        if !is_finite(&m) {
            return Err(Error::Parse("matrix has non-finite entries".into()));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub dim_in: usize,
    pub dim_out: usize,
    pub choi: MatrixDoc,
}

impl From<&MapRep> for MapDoc {
    fn from(phi: &MapRep) -> Self {
        Self {
            dim_in: phi.dim_in(),
            dim_out: phi.dim_out(),
            choi: MatrixDoc::from(phi.choi()),
        }
    }
}

impl TryFrom<&MapDoc> for MapRep {
    type Error = Error;

    fn try_from(doc: &MapDoc) -> Result<MapRep> {
        let choi = Matrix::try_from(&doc.choi)?;
        MapRep::from_choi(doc.dim_in, doc.dim_out, choi).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Compact JSON formatter that writes floats as `{:.16e}`.
struct SigFig17;

impl Formatter for SigFig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // JSON has no encoding for non-finite numbers.
            CompactFormatter.write_null(writer)
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes any document with 17-significant-digit floats.
pub fn to_document<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFig17);
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn from_document<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_to_string(a: &Matrix) -> String {
    to_document(&MatrixDoc::from(a))
}

pub fn matrix_from_str(text: &str) -> Result<Matrix> {
    Matrix::try_from(&from_document::<MatrixDoc>(text)?)
}

pub fn map_to_string(phi: &MapRep) -> String {
    to_document(&MapDoc::from(phi))
}

pub fn map_from_str(text: &str) -> Result<MapRep> {
    MapRep::try_from(&from_document::<MapDoc>(text)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    matrix_from_str(&read(path)?)
}

pub fn read_map(path: &Path) -> Result<MapRep> {
    map_from_str(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{real_matrix, Sampler};
    use crate::posmaps::transpose_map;
    use proptest::prelude::*;

    #[test]
    fn matrix_document_shape() {
        let a = real_matrix(1, 2, &[6.0, -0.5]);
        assert_eq!(
            matrix_to_string(&a),
            r#"{"rows":1,"cols":2,"data":[[6.0000000000000000e0,0.0000000000000000e0],[-5.0000000000000000e-1,0.0000000000000000e0]]}"#
        );
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            matrix_from_str(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(matrix_from_str("not json"), Err(Error::Parse(_))));
        assert!(matches!(
            map_from_str(r#"{"dim_in":2,"dim_out":2,"choi":{"rows":1,"cols":1,"data":[[1,0]]}}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn map_round_trip() {
        let phi = transpose_map(2).unwrap();
        let back = map_from_str(&map_to_string(&phi)).unwrap();
        assert_eq!(back.choi(), phi.choi());
        assert_eq!((back.dim_in(), back.dim_out()), (2, 2));
    }

    proptest! {
        #[test]
        fn matrix_round_trip_is_bit_exact(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5, exp in -200i32..200) {
            let a = Sampler::new(seed).gaussian(rows, cols).scale(10f64.powi(exp));
            let back = matrix_from_str(&matrix_to_string(&a)).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
