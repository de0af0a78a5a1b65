use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::{build_float_matrix, GeneratorName, IrrepLabel, OperatorMatrix};
use crate::qarith::QValue;

type Key = (IrrepLabel, GeneratorName, u64);

/// Memo of floating generator matrices keyed by `(label, generator, q bits)`.
///
/// Readers share the lock; a miss builds outside the lock and the first
/// inserted value wins, so every caller sees the same `Arc`.
#[derive(Default)]
pub struct MatrixCache {
    inner: RwLock<HashMap<Key, Arc<OperatorMatrix>>>,
}

impl MatrixCache {
    pub fn global() -> &'static MatrixCache {
        static CACHE: OnceLock<MatrixCache> = OnceLock::new();
        CACHE.get_or_init(MatrixCache::default)
    }

    pub fn get(
        &self,
        label: IrrepLabel,
        gen: GeneratorName,
        q: QValue,
    ) -> Option<Arc<OperatorMatrix>> {
        let map = self.inner.read().unwrap_or_else(|e| e.into_inner());
        map.get(&(label, gen, q.get().to_bits())).cloned()
    }

    pub fn get_or_build(
        &self,
        label: IrrepLabel,
        gen: GeneratorName,
        q: QValue,
    ) -> Arc<OperatorMatrix> {
        if let Some(m) = self.get(label, gen, q) {
            return m;
        }
        self.insert(label, gen, q, build_float_matrix(label, gen, q))
    }

    /// Inserts unless already present; returns the stored matrix.
    pub fn insert(
        &self,
        label: IrrepLabel,
        gen: GeneratorName,
        q: QValue,
        m: OperatorMatrix,
    ) -> Arc<OperatorMatrix> {
        let mut map = self.inner.write().unwrap_or_else(|e| e.into_inner());
        map.entry((label, gen, q.get().to_bits()))
            .or_insert_with(|| Arc::new(m))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
