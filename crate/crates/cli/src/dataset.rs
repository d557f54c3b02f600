//! Dataset generation and the manifest that indexes it.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use polybench::generators::{make_polygon, FamilyId, PolygonSpec};
use polybench::geom::Polygon2;
use polybench::mesh::PolygonMesh;
use polybench::mesher::{build_canvas_mesh, build_hierarchy};
use polybench::{Error, Result};

use crate::{BenchmarkConfig, Failure};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub t_samples: usize,
    pub random_count: usize,
    pub levels: usize,
    pub canvas: bool,
    pub entries: Vec<ManifestEntry>,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub mesh_id: String,
    pub family: FamilyId,
    pub t: f64,
    /// Seed of a random polygon.
    pub seed: Option<u64>,
    /// Polygon text file, relative to the dataset root.
    pub polygon: String,
    pub levels: Vec<LevelFiles>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelFiles {
    pub level: usize,
    pub off: String,
    pub tags: String,
    pub vertices: usize,
    pub cells: usize,
    pub h: f64,
}

impl Manifest {
    pub fn load(root: &Path) -> Result<Self> {
        let text = fs::read_to_string(root.join(MANIFEST))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn count(&self, family: FamilyId) -> usize {
        self.entries.iter().filter(|e| e.family == family).count()
    }
}

impl ManifestEntry {
    pub fn load_polygon(&self, root: &Path) -> Result<Polygon2> {
        Polygon2::from_text(&fs::read_to_string(root.join(&self.polygon))?)
    }

    pub fn load_mesh(&self, root: &Path, level: usize) -> Result<PolygonMesh> {
        let files = self
            .levels
            .iter()
            .find(|l| l.level == level)
            .ok_or_else(|| Error::InvalidParameter(format!("{} has no level {level}", self.mesh_id)))?;
        let off = fs::read_to_string(root.join(&files.off))?;
        let tags = fs::read_to_string(root.join(&files.tags))?;
        PolygonMesh::from_off(&off, Some(&tags))
    }
}

/// Specs of the dataset in output order: families in the given order, `t` increasing,
/// then the random polygons.
pub fn dataset_specs(config: &BenchmarkConfig) -> Vec<(String, PolygonSpec)> {
    let mut out = Vec::new();
    for &f in config.families.iter().filter(|f| **f != FamilyId::Random) {
        for (i, t) in config.t_values().into_iter().enumerate() {
            out.push((format!("{}_{i:02}", f.name()), PolygonSpec::new(f, t)));
        }
    }
    if config.families.contains(&FamilyId::Random) {
        for k in 0..config.random_count as u64 {
            out.push((format!("random_{k:03}"), PolygonSpec::random(config.seed.wrapping_add(k))));
        }
    }
    out
}

struct Generated {
    entry: ManifestEntry,
    files: Vec<(PathBuf, String)>,
}

fn generate_one(config: &BenchmarkConfig, id: &str, spec: &PolygonSpec) -> Result<Generated> {
    let polygon = make_polygon(spec)?;
    let poly_path = format!("polygons/{id}.txt");
    let mut files = vec![(PathBuf::from(&poly_path), polygon.to_text())];
    let mut levels = Vec::new();
    if config.canvas {
        let hierarchy = build_hierarchy(build_canvas_mesh(&polygon)?, config.levels)?;
        for (level, mesh) in hierarchy.levels.iter().enumerate() {
            let off = format!("meshes/{id}_L{level}.off");
            let tags = format!("meshes/{id}_L{level}.tags");
            files.push((PathBuf::from(&off), mesh.to_off()));
            files.push((PathBuf::from(&tags), mesh.tags_text()));
            levels.push(LevelFiles {
                level,
                off,
                tags,
                vertices: mesh.num_vertices(),
                cells: mesh.num_cells(),
                h: hierarchy.level_sizes[level],
            });
        }
    }
    let seed = (spec.family == FamilyId::Random).then_some(spec.seed);
    let entry = ManifestEntry { mesh_id: id.to_string(), family: spec.family, t: spec.t, seed, polygon: poly_path, levels };
    Ok(Generated { entry, files })
}

/// Writes polygons, meshes and the manifest under `config.out`.
pub fn generate(config: &BenchmarkConfig) -> Result<Manifest> {
    config.validate()?;
    let specs = dataset_specs(config);
    let results: Vec<Result<Generated>> = specs.par_iter().map(|(id, spec)| generate_one(config, id, spec)).collect();
    let root = &config.out;
    fs::create_dir_all(root.join("polygons"))?;
    if config.canvas {
        fs::create_dir_all(root.join("meshes"))?;
    }
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for ((id, spec), result) in specs.iter().zip(results) {
        match result {
            Ok(g) => {
                for (path, text) in &g.files {
                    fs::write(root.join(path), text)?;
                }
                entries.push(g.entry);
            }
            Err(e) => failures.push(Failure::new(id, None, format!("{spec:?}: {e}"))),
        }
    }
    let manifest = Manifest {
        seed: config.seed,
        t_samples: config.t_samples,
        random_count: config.random_count,
        levels: config.levels,
        canvas: config.canvas,
        entries,
        failures,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(root.join(MANIFEST), text)?;
    Ok(manifest)
}
