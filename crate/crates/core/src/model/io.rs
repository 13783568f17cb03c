//! Checkpoint container, all integers little-endian:
//!
//! ```text
//! "RLFM" | version u32 | config_len u32 | config JSON
//! tensor_count u32 | per tensor: name_len u32, name, rows u32, cols u32
//! per tensor: rows*cols f64
//! history_len u32 | history JSON
//! ```

use std::fs;
use std::path::Path;

use super::{EpochRecord, ModelCheckpoint, ModelConfig, ModelError, Tensor};

pub const MAGIC: &[u8; 4] = b"RLFM";
pub const FORMAT_VERSION: u32 = 1;

fn put_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&u32::try_from(v).expect("checkpoint field fits in u32").to_le_bytes());
}

pub fn to_bytes(ckpt: &ModelCheckpoint) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    let config = serde_json::to_vec(&ckpt.config).expect("config serializes");
    put_u32(&mut out, config.len());
    out.extend_from_slice(&config);
    put_u32(&mut out, ckpt.tensors.len());
    for t in &ckpt.tensors {
        put_u32(&mut out, t.name.len());
        out.extend_from_slice(t.name.as_bytes());
        put_u32(&mut out, t.rows);
        put_u32(&mut out, t.cols);
    }
    for t in &ckpt.tensors {
        for v in &t.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    let history = serde_json::to_vec(&ckpt.history).expect("history serializes");
    put_u32(&mut out, history.len());
    out.extend_from_slice(&history);
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], ModelError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let Some(end) = end else {
            return Err(ModelError::Format(format!("truncated file while reading {what} at byte {}", self.pos)));
        };
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<usize, ModelError> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes(b.try_into().expect("4 bytes")) as usize)
    }
}

pub fn from_bytes(buf: &[u8]) -> Result<ModelCheckpoint, ModelError> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return Err(ModelError::Format("not a relicforge checkpoint (bad magic)".into()));
    }
    let version = r.u32("version")?;
    if version != FORMAT_VERSION as usize {
        return Err(ModelError::Format(format!("unsupported checkpoint version {version}, expected {FORMAT_VERSION}")));
    }
    let n = r.u32("config length")?;
    let config: ModelConfig =
        serde_json::from_slice(r.take(n, "config")?).map_err(|e| ModelError::Format(format!("config: {e}")))?;
    config.validate().map_err(|e| ModelError::Format(e.to_string()))?;
    let expected = config.shapes();
    let count = r.u32("tensor count")?;
    if count != expected.len() {
        return Err(ModelError::Format(format!("shape table lists {count} tensors, config needs {}", expected.len())));
    }
    let mut tensors = Vec::with_capacity(count);
    for (name, rows, cols) in &expected {
        let len = r.u32("tensor name length")?;
        let got = std::str::from_utf8(r.take(len, "tensor name")?)
            .map_err(|_| ModelError::Format("tensor name is not UTF-8".into()))?;
        let (gr, gc) = (r.u32("rows")?, r.u32("cols")?);
        if got != name || gr != *rows || gc != *cols {
            return Err(ModelError::Format(format!("shape table entry {got} {gr}x{gc}, expected {name} {rows}x{cols}")));
        }
        tensors.push(Tensor::zeros(name, *rows, *cols));
    }
    for t in &mut tensors {
        let bytes = r.take(t.data.len() * 8, &t.name)?;
        for (v, b) in t.data.iter_mut().zip(bytes.chunks_exact(8)) {
            *v = f64::from_le_bytes(b.try_into().expect("8 bytes"));
        }
        if t.data.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Format(format!("tensor {} holds a non-finite value", t.name)));
        }
    }
    let n = r.u32("history length")?;
    let history: Vec<EpochRecord> =
        serde_json::from_slice(r.take(n, "history")?).map_err(|e| ModelError::Format(format!("history: {e}")))?;
    if r.pos != buf.len() {
        return Err(ModelError::Format(format!("{} trailing bytes", buf.len() - r.pos)));
    }
    Ok(ModelCheckpoint { config, tensors, history })
}

pub fn save(ckpt: &ModelCheckpoint, path: &Path) -> Result<(), ModelError> {
    ckpt.check_shapes()?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| ModelError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, to_bytes(ckpt)).map_err(|source| ModelError::Io { path: path.to_path_buf(), source })
}

pub fn load(path: &Path) -> Result<ModelCheckpoint, ModelError> {
    let buf = fs::read(path).map_err(|source| ModelError::Io { path: path.to_path_buf(), source })?;
    from_bytes(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EpochRecord;

    fn sample() -> ModelCheckpoint {
        let cfg = ModelConfig { hidden: 3, layers: 2, lr: 0.1 / 3.0, ..ModelConfig::default() };
        let mut c = ModelCheckpoint::init(&cfg).unwrap();
        c.history.push(EpochRecord { epoch: 0, loss: 2.0 / 3.0, train_accuracy: 0.1, val_accuracy: Some(1.0 / 7.0) });
        c
    }

    #[test]
    fn round_trip_is_exact() {
        let c = sample();
        assert_eq!(from_bytes(&to_bytes(&c)).unwrap(), c);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.rlfm");
        save(&c, &p).unwrap();
        assert_eq!(load(&p).unwrap(), c);
    }

    #[test]
    fn truncated_and_versioned() {
        let bytes = to_bytes(&sample());
        for cut in [0, 3, 10, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(from_bytes(&bytes[..cut]), Err(ModelError::Format(_))), "cut {cut}");
        }
        let mut v = bytes.clone();
        v[4..8].copy_from_slice(&999u32.to_le_bytes());
        match from_bytes(&v) {
            Err(ModelError::Format(m)) => assert!(m.contains("version 999"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn corrupted_shape_table() {
        let mut bytes = to_bytes(&sample());
        let config_len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        // First tensor's rows field follows the count and the name "l0.W_i".
        let rows_at = 12 + config_len + 4 + 4 + "l0.W_i".len();
        bytes[rows_at] = 77;
        assert!(matches!(from_bytes(&bytes), Err(ModelError::Format(_))));
    }
}
