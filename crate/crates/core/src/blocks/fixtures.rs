//! Atomic blocks stored as JSON fixtures and re-validated on load.
//!
//! A fixture is `{"manifest": ..., "complex": ...}` where the complex uses the
//! concrete JSON format. The files are produced by `build_block` and checked
//! into `fixtures/blocks/`.

use super::assemble::BlockSet;
use super::*;
use crate::mesh::ConcreteParseError;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{name}: {source}")]
    Io { name: String, source: std::io::Error },
    #[error("{name}: malformed manifest: {message}")]
    Manifest { name: String, message: String },
    #[error("{name}: {source}")]
    Complex { name: String, source: ConcreteParseError },
    #[error("{name}: manifest declares {found:?}")]
    WrongKind { name: String, found: BlockKind },
    #[error(transparent)]
    Invalid(#[from] BlockError),
    #[error(transparent)]
    Orientation(#[from] super::assemble::AssembleError),
    #[error("{kind:?} block: socket {face:?} has lobe axis {found:?}, expected {want:?}")]
    LobeAxis { kind: BlockKind, face: FaceSquare, found: Axis, want: Axis },
}

pub fn fixture_name(kind: BlockKind) -> String {
    format!("{}.json", kind.name())
}

pub fn fixture_to_json(block: &AtomicBlock) -> String {
    let manifest = serde_json::to_string(&block.manifest).expect("serializable");
    format!("{{\"manifest\":{manifest},\"complex\":{}}}\n", block.complex.to_json())
}

#[derive(serde::Deserialize)]
struct RawFixture {
    manifest: Manifest,
    complex: serde_json::Value,
}

/// Parses one fixture without validating it.
pub fn parse_fixture(name: &str, text: &str) -> Result<AtomicBlock, LoadError> {
    let raw: RawFixture =
        serde_json::from_str(text).map_err(|e| LoadError::Manifest { name: name.into(), message: e.to_string() })?;
    let complex = ConcreteComplex::from_json(&raw.complex.to_string())
        .map_err(|source| LoadError::Complex { name: name.into(), source })?;
    Ok(AtomicBlock { manifest: raw.manifest, complex })
}

/// Validates each block against its manifest. Every face is compared with
/// the one canonical blank or socket triangulation, so faces of the same
/// pattern are identical across blocks. Casing sockets must carry the lobe
/// axes the tube runs are laid out for.
pub fn validate_block_set(blocks: &[AtomicBlock]) -> Result<(), LoadError> {
    for b in blocks {
        validate_block(b)?;
        let kind = b.manifest.kind;
        for f in &b.manifest.faces {
            let want = match (kind, f.pattern) {
                (BlockKind::Casing, FacePattern::TopSocket(_)) => casing::TOP_LOBES,
                (BlockKind::Casing, FacePattern::BottomSocket(_)) => casing::BOTTOM_LOBES,
                _ => continue,
            };
            if let Some(found) = f.pattern.lobe_axis() {
                if found != want {
                    return Err(LoadError::LobeAxis { kind, face: f.square, found, want });
                }
            }
        }
    }
    Ok(())
}

fn check_kind(name: &str, kind: BlockKind, b: &AtomicBlock) -> Result<(), LoadError> {
    if b.manifest.kind != kind {
        return Err(LoadError::WrongKind { name: name.into(), found: b.manifest.kind });
    }
    Ok(())
}

/// Loads and validates the eight fixtures from `dir`.
pub fn load_atomic_blocks(dir: &Path) -> Result<BlockSet, LoadError> {
    let mut blocks = Vec::with_capacity(8);
    for kind in BlockKind::ALL {
        let name = fixture_name(kind);
        let path: PathBuf = dir.join(&name);
        let text = std::fs::read_to_string(&path).map_err(|source| LoadError::Io { name: name.clone(), source })?;
        let b = parse_fixture(&name, &text)?;
        check_kind(&name, kind, &b)?;
        blocks.push(b);
    }
    finish(blocks)
}

fn finish(blocks: Vec<AtomicBlock>) -> Result<BlockSet, LoadError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        blocks.par_iter().try_for_each(|b| validate_block_set(std::slice::from_ref(b)))?;
    }
    #[cfg(not(feature = "parallel"))]
    validate_block_set(&blocks)?;
    let set = BlockSet::new(blocks).expect("one block per kind");
    super::assemble::check_orientations(&set)?;
    Ok(set)
}

const BUILTIN: [&str; 8] = [
    include_str!("../../fixtures/blocks/empty.json"),
    include_str!("../../fixtures/blocks/straight_top.json"),
    include_str!("../../fixtures/blocks/horiz_top_corner.json"),
    include_str!("../../fixtures/blocks/vert_top_corner.json"),
    include_str!("../../fixtures/blocks/straight_bottom.json"),
    include_str!("../../fixtures/blocks/horiz_bottom_corner.json"),
    include_str!("../../fixtures/blocks/vert_bottom_corner.json"),
    include_str!("../../fixtures/blocks/casing.json"),
];

/// The fixtures compiled into the library, validated.
pub fn builtin_blocks() -> Result<BlockSet, LoadError> {
    let mut blocks = Vec::with_capacity(8);
    for (kind, text) in BlockKind::ALL.into_iter().zip(BUILTIN) {
        let name = fixture_name(kind);
        let b = parse_fixture(&name, text)?;
        check_kind(&name, kind, &b)?;
        blocks.push(b);
    }
    finish(blocks)
}

/// Directory of the checked-in fixtures.
pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("blocks")
}

/// Writes freshly generated fixtures to `dir`.
pub fn write_fixtures(dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for kind in BlockKind::ALL {
        let b = build_block(kind).map_err(|e| std::io::Error::other(e.to_string()))?;
        std::fs::write(dir.join(fixture_name(kind)), fixture_to_json(&b))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::assemble::{place_block, Rotation};

    /// Set `SURFLIFT_WRITE_FIXTURES=1` to refresh the checked-in files.
    #[test]
    fn fixtures_match_the_generator() {
        if std::env::var_os("SURFLIFT_WRITE_FIXTURES").is_some() {
            write_fixtures(&fixture_dir()).unwrap();
        }
        let set = load_atomic_blocks(&fixture_dir()).unwrap();
        for kind in BlockKind::ALL {
            assert_eq!(set.get(kind), &build_block(kind).unwrap(), "{kind:?} fixture is stale");
        }
        assert_eq!(set.get(BlockKind::Empty).complex.coords.len(), 27);
        assert_eq!(set.get(BlockKind::Empty).complex.pair.tetrahedra.len(), 48);
    }

    #[test]
    fn builtin_fixtures_load() {
        let set = builtin_blocks().unwrap();
        assert_eq!(set.blocks().len(), 8);
    }

    #[test]
    fn rotated_socket_is_rejected() {
        let text = std::fs::read_to_string(fixture_dir().join("straight_top.json")).unwrap();
        let b = parse_fixture("straight_top.json", &text).unwrap();
        let turned = place_block(&b, Rotation::QUARTER_TURN_Z, [0, 0, 0]);
        let bad = AtomicBlock { manifest: b.manifest.clone(), complex: turned.complex };
        let e = validate_block_set(&[bad]).unwrap_err();
        assert!(matches!(&e, LoadError::Invalid(BlockError { face: Some(_), .. })), "{e}");
        assert!(e.to_string().contains("surface trace"), "{e}");
    }
}
