//! Framed links as linking matrices.
//!
//! A [`FramedLink`] is the algebraic shadow of a 4-dimensional handle
//! diagram: an ordered list of components (framed 2-handles and dotted
//! 1-handles), a symmetric integer linking matrix and a count of 3-handles.
//! The diagonal entry of a 2-handle row is its framing. A dotted row has a
//! zero diagonal, and its off-diagonal entries record how many times (with
//! sign) each 2-handle runs over that 1-handle. Two dotted circles never
//! link each other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const LINK_SCHEMA: &str = "flk-1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    TwoHandle { framing: i64 },
    Dotted,
}

impl ComponentKind {
    pub fn is_dotted(self) -> bool {
        matches!(self, ComponentKind::Dotted)
    }

    pub fn framing(self) -> Option<i64> {
        match self {
            ComponentKind::TwoHandle { framing } => Some(framing),
            ComponentKind::Dotted => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LinkWire", into = "LinkWire")]
pub struct FramedLink {
    dotted: Vec<bool>,
    /// Row-major, full symmetric storage.
    entries: Vec<i64>,
    three_handles: u64,
    labels: Vec<Option<String>>,
}

impl Default for FramedLink {
    fn default() -> Self {
        Self::empty()
    }
}

impl FramedLink {
    pub fn empty() -> Self {
        FramedLink {
            dotted: Vec::new(),
            entries: Vec::new(),
            three_handles: 0,
            labels: Vec::new(),
        }
    }

    /// Builds a link from component kinds and the full symmetric matrix. The
    /// diagonal of 2-handle rows must match the declared framings.
    pub fn from_parts(components: &[ComponentKind], matrix: &[Vec<i64>], three_handles: u64) -> Result<Self> {
        let n = components.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("linking matrix must be {n}x{n}")));
        }
        let link = FramedLink {
            dotted: components.iter().map(|c| c.is_dotted()).collect(),
            entries: matrix.iter().flatten().copied().collect(),
            three_handles,
            labels: vec![None; n],
        };
        for (i, c) in components.iter().enumerate() {
            if let Some(f) = c.framing() {
                if matrix[i][i] != f {
                    return Err(Error::invalid(format!(
                        "diagonal entry {} of row {i} disagrees with framing {f}",
                        matrix[i][i]
                    )));
                }
            }
        }
        link.validate()?;
        Ok(link)
    }

    /// All components 2-handles; framings read off the diagonal.
    pub fn from_matrix(matrix: &[Vec<i64>]) -> Result<Self> {
        let kinds: Vec<_> = matrix
            .iter()
            .enumerate()
            .map(|(i, r)| ComponentKind::TwoHandle {
                framing: r.get(i).copied().unwrap_or(0),
            })
            .collect();
        Self::from_parts(&kinds, matrix, 0)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in 0..i {
                if self.at(i, j) != self.at(j, i) {
                    return Err(Error::invalid(format!("linking matrix not symmetric at ({i},{j})")));
                }
                if self.dotted[i] && self.dotted[j] && self.at(i, j) != 0 {
                    return Err(Error::invalid(format!("dotted components {j} and {i} are linked")));
                }
            }
            if self.dotted[i] && self.at(i, i) != 0 {
                return Err(Error::invalid(format!("dotted component {i} has nonzero diagonal")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dotted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dotted.is_empty()
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.len() + j]
    }

    #[inline]
    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: i64) {
        let n = self.len();
        self.entries[i * n + j] = v;
        self.entries[j * n + i] = v;
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        }
    }

    pub fn component(&self, i: usize) -> ComponentKind {
        if self.dotted[i] {
            ComponentKind::Dotted
        } else {
            ComponentKind::TwoHandle { framing: self.at(i, i) }
        }
    }

    pub fn components(&self) -> Vec<ComponentKind> {
        (0..self.len()).map(|i| self.component(i)).collect()
    }

    pub fn is_dotted(&self, i: usize) -> bool {
        self.dotted[i]
    }

    pub fn framing(&self, i: usize) -> Option<i64> {
        self.component(i).framing()
    }

    pub fn linking(&self, i: usize, j: usize) -> i64 {
        self.at(i, j)
    }

    pub fn three_handles(&self) -> u64 {
        self.three_handles
    }

    pub(crate) fn set_three_handles(&mut self, t: u64) {
        self.three_handles = t;
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels[i].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn set_label(&mut self, i: usize, label: impl Into<String>) {
        self.labels[i] = Some(label.into());
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        for (i, l) in labels.into_iter().enumerate().take(self.len()) {
            self.labels[i] = Some(l.into());
        }
        self
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn dotted_count(&self) -> usize {
        self.dotted.iter().filter(|&&d| d).count()
    }

    pub fn two_handle_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.dotted[i]).collect()
    }

    pub fn matrix(&self) -> Matrix {
        let n = self.len();
        self.entries.chunks(n.max(1)).take(n).map(<[i64]>::to_vec).collect()
    }

    /// Linking matrix restricted to the 2-handles, in component order.
    pub fn two_handle_block(&self) -> Matrix {
        let idx = self.two_handle_indices();
        idx.iter()
            .map(|&i| idx.iter().map(|&j| self.at(i, j)).collect())
            .collect()
    }

    /// Appends a component. `links` lists (other component, linking number);
    /// unspecified entries are zero. Returns the new index.
    pub fn push(&mut self, kind: ComponentKind, links: &[(usize, i64)], label: Option<String>) -> Result<usize> {
        let n = self.len();
        for &(j, v) in links {
            self.check_index(j)?;
            if kind.is_dotted() && self.dotted[j] && v != 0 {
                return Err(Error::invalid("dotted components cannot link each other"));
            }
        }
        let mut entries = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..n {
            entries.extend_from_slice(&self.entries[i * n..(i + 1) * n]);
            entries.push(0);
        }
        entries.extend(std::iter::repeat_n(0, n + 1));
        self.entries = entries;
        self.dotted.push(kind.is_dotted());
        self.labels.push(label);
        if let Some(f) = kind.framing() {
            self.set_sym(n, n, f);
        }
        for &(j, v) in links {
            self.set_sym(n, j, v);
        }
        Ok(n)
    }

    /// Deletes the given components; all other entries are kept.
    pub(crate) fn remove(&mut self, indices: &[usize]) {
        let n = self.len();
        let keep: Vec<usize> = (0..n).filter(|i| !indices.contains(i)).collect();
        let mut entries = Vec::with_capacity(keep.len() * keep.len());
        for &i in &keep {
            for &j in &keep {
                entries.push(self.entries[i * n + j]);
            }
        }
        self.entries = entries;
        self.dotted = keep.iter().map(|&i| self.dotted[i]).collect();
        self.labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
    }

    /// The link with components reordered so that new position `p` holds
    /// old component `order[p]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::invalid("not a permutation of the components"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                entries.push(self.at(i, j));
            }
        }
        Ok(FramedLink {
            dotted: order.iter().map(|&i| self.dotted[i]).collect(),
            entries,
            three_handles: self.three_handles,
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
        })
    }

    /// Same components, matrix and 3-handle count; labels ignored.
    pub fn same_diagram(&self, other: &FramedLink) -> bool {
        self.dotted == other.dotted && self.entries == other.entries && self.three_handles == other.three_handles
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("links always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// Wire form: row-major lower-triangular entries including the diagonal.
#[derive(Serialize, Deserialize)]
struct LinkWire {
    schema: String,
    components: Vec<ComponentKind>,
    linking: Vec<i64>,
    three_handles: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Option<String>>>,
}

impl From<FramedLink> for LinkWire {
    fn from(link: FramedLink) -> Self {
        let n = link.len();
        let linking = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).map(|(i, j)| link.at(i, j)).collect();
        let labels = link.labels.iter().any(Option::is_some).then(|| link.labels.clone());
        LinkWire {
            schema: LINK_SCHEMA.to_string(),
            components: link.components(),
            linking,
            three_handles: link.three_handles,
            labels,
        }
    }
}

impl TryFrom<LinkWire> for FramedLink {
    type Error = Error;

    fn try_from(w: LinkWire) -> Result<Self> {
        if w.schema != LINK_SCHEMA {
            return Err(Error::Schema(format!("expected schema {LINK_SCHEMA}, found {}", w.schema)));
        }
        let n = w.components.len();
        if w.linking.len() != n * (n + 1) / 2 {
            return Err(Error::Schema(format!(
                "{n} components need {} lower-triangular entries, found {}",
                n * (n + 1) / 2,
                w.linking.len()
            )));
        }
        let mut m = vec![vec![0i64; n]; n];
        let mut it = w.linking.iter();
        for i in 0..n {
            for j in 0..=i {
                let v = *it.next().expect("length checked");
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        let mut link = FramedLink::from_parts(&w.components, &m, w.three_handles)
            .map_err(|e| Error::Schema(e.to_string()))?;
        if let Some(labels) = w.labels {
            if labels.len() != n {
                return Err(Error::Schema("label count differs from component count".into()));
            }
            link.labels = labels;
        }
        Ok(link)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FramedLink {
        let kinds = [
            ComponentKind::Dotted,
            ComponentKind::TwoHandle { framing: 0 },
            ComponentKind::TwoHandle { framing: -1 },
        ];
        let m = vec![vec![0, 1, 2], vec![1, 0, -3], vec![2, -3, -1]];
        FramedLink::from_parts(&kinds, &m, 2).unwrap().with_labels(["x", "c", "a"])
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let link = sample();
        let text = link.to_json();
        assert!(text.contains("\"flk-1\""));
        assert_eq!(FramedLink::from_json(&text).unwrap(), link);
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let bad_schema = sample().to_json().replace("flk-1", "flk-0");
        assert!(matches!(FramedLink::from_json(&bad_schema), Err(Error::Schema(_))));

        let text = r#"{"schema":"flk-1","components":[{"kind":"dotted"},{"kind":"dotted"}],"linking":[0,1,0],"three_handles":0}"#;
        assert!(FramedLink::from_json(text).is_err());

        let text = r#"{"schema":"flk-1","components":[{"kind":"two_handle","framing":-1}],"linking":[-2],"three_handles":0}"#;
        assert!(FramedLink::from_json(text).is_err());

        let text = r#"{"schema":"flk-1","components":[{"kind":"two_handle","framing":-1}],"linking":[],"three_handles":0}"#;
        assert!(FramedLink::from_json(text).is_err());
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        assert!(FramedLink::from_matrix(&[vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn push_and_remove() {
        let mut link = sample();
        let k = link.push(ComponentKind::TwoHandle { framing: 5 }, &[(0, 1), (2, 4)], Some("n".into())).unwrap();
        assert_eq!(k, 3);
        assert_eq!(link.linking(3, 2), 4);
        assert_eq!(link.framing(3), Some(5));
        assert!(link.push(ComponentKind::Dotted, &[(0, 1)], None).is_err());
        link.remove(&[0, 2]);
        assert_eq!(link.len(), 2);
        assert_eq!(link.label(1), Some("n"));
        assert_eq!(link.matrix(), vec![vec![0, 0], vec![0, 5]]);
    }

    #[test]
    fn permutation_moves_rows_and_columns() {
        let link = sample();
        let p = link.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.component(0), ComponentKind::TwoHandle { framing: -1 });
        assert!(p.is_dotted(1));
        assert_eq!(p.linking(0, 1), 2);
        assert_eq!(p.linking(0, 2), -3);
        assert!(link.permuted(&[0, 0, 1]).is_err());
    }

    #[test]
    fn two_handle_block_skips_dotted_rows() {
        assert_eq!(sample().two_handle_block(), vec![vec![0, -3], vec![-3, -1]]);
        assert_eq!(sample().dotted_count(), 1);
    }
}
