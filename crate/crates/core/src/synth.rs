//! Voxel scenes, the tetrahedron test object and the vignetting mask.

use std::fmt;
use std::str::FromStr;

use ndarray::{s, Array2, Zip};

use crate::error::{Error, Result};
use crate::kernels::DepthPlane;
use crate::transform::{stamp_pattern, stamp_row, MultiviewImage, Parallax};

/// A 3D point: cell position, depth plane and intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Voxel {
    pub cx: i64,
    pub cy: i64,
    pub depth: DepthPlane,
    pub intensity: f64,
}

impl Voxel {
    pub fn new(cx: i64, cy: i64, depth: DepthPlane, intensity: f64) -> Self {
        Voxel {
            cx,
            cy,
            depth,
            intensity,
        }
    }

    /// Cell rectangle `(x0, y0, width, height)` covered by the voxel's stamp.
    pub fn footprint(&self, parallax: Parallax) -> (i64, i64, i64, i64) {
        let f = self.depth.footprint_cells() as i64;
        let height = match parallax {
            Parallax::Fp => f,
            Parallax::Hpo => 1,
        };
        (
            self.depth.stamp_origin(self.cx),
            stamp_row(self.depth, parallax, self.cy),
            f,
            height,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub width_cells: usize,
    pub height_cells: usize,
    pub cell_px: usize,
    pub parallax: Parallax,
    pub voxels: Vec<Voxel>,
}

impl SceneSpec {
    pub fn new(
        width_cells: usize,
        height_cells: usize,
        cell_px: usize,
        parallax: Parallax,
    ) -> Self {
        SceneSpec {
            width_cells,
            height_cells,
            cell_px,
            parallax,
            voxels: Vec::new(),
        }
    }

    pub fn with_voxel(mut self, voxel: Voxel) -> Self {
        self.voxels.push(voxel);
        self
    }

    /// Checks footprints and intensities.
    pub fn validate(&self) -> Result<()> {
        if self.width_cells == 0 || self.height_cells == 0 {
            return Err(Error::Scene("the canvas is empty".into()));
        }
        for (index, v) in self.voxels.iter().enumerate() {
            if !(0.0..=1.0).contains(&v.intensity) {
                return Err(Error::Scene(format!(
                    "voxel {index} has intensity {} outside [0, 1]",
                    v.intensity
                )));
            }
            let (x0, y0, w, h) = v.footprint(self.parallax);
            if x0 < 0
                || y0 < 0
                || x0 + w > self.width_cells as i64
                || y0 + h > self.height_cells as i64
            {
                return Err(Error::Footprint {
                    index,
                    cx: v.cx,
                    cy: v.cy,
                    depth: v.depth.get(),
                    width: self.width_cells,
                    height: self.height_cells,
                });
            }
        }
        Ok(())
    }
}

/// Stamps every voxel's pattern onto a black canvas, blending overlaps by
/// maximum.
pub fn render_scene(scene: &SceneSpec) -> Result<MultiviewImage> {
    scene.validate()?;
    let cp = scene.cell_px;
    let mut px = Array2::<f64>::zeros((scene.height_cells * cp, scene.width_cells * cp));
    for v in &scene.voxels {
        let pattern = stamp_pattern(v.depth, scene.parallax, cp)?;
        let (x0, y0, _, _) = v.footprint(scene.parallax);
        let (x0, y0) = (x0 as usize * cp, y0 as usize * cp);
        let (h, w) = pattern.dim();
        Zip::from(px.slice_mut(s![y0..y0 + h, x0..x0 + w]))
            .and(&pattern)
            .for_each(|o, &p| *o = o.max(p * v.intensity));
    }
    MultiviewImage::clamped(px, cp, scene.parallax)
}

impl fmt::Display for SceneSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "canvas {} {} cell {} parallax {}",
            self.width_cells, self.height_cells, self.cell_px, self.parallax
        )?;
        for v in &self.voxels {
            writeln!(
                f,
                "voxel {} {} {} {}",
                v.cx,
                v.cy,
                v.depth.get(),
                v.intensity
            )?;
        }
        Ok(())
    }
}

impl FromStr for SceneSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut scene: Option<SceneSpec> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Scene(format!("line {}: {msg}: {raw:?}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "canvas" => {
                    if scene.is_some() {
                        return Err(err("second canvas header"));
                    }
                    match fields.as_slice() {
                        [_, w, h, "cell", cp, "parallax", p] => {
                            let num = |s: &str| s.parse::<usize>().map_err(|_| err("bad number"));
                            scene = Some(SceneSpec::new(num(w)?, num(h)?, num(cp)?, p.parse()?));
                        }
                        _ => return Err(err("expected `canvas W H cell CP parallax hpo|fp`")),
                    }
                }
                "voxel" => {
                    let scene = scene
                        .as_mut()
                        .ok_or_else(|| err("voxel before canvas header"))?;
                    let [_, cx, cy, d, i] = fields.as_slice() else {
                        return Err(err("expected `voxel cx cy d intensity`"));
                    };
                    let cx = cx.parse().map_err(|_| err("bad cx"))?;
                    let cy = cy.parse().map_err(|_| err("bad cy"))?;
                    let d: i32 = d.parse().map_err(|_| err("bad depth"))?;
                    let depth = DepthPlane::new(d).map_err(|_| err("depth 0 is not a plane"))?;
                    let intensity = i.parse().map_err(|_| err("bad intensity"))?;
                    scene.voxels.push(Voxel::new(cx, cy, depth, intensity));
                }
                _ => return Err(err("unknown record")),
            }
        }
        let scene = scene.ok_or_else(|| Error::Scene("missing canvas header".into()))?;
        scene.validate()?;
        Ok(scene)
    }
}

/// Wireframe tetrahedron: three base vertices on `base`, an apex on
/// `apex`, edges sampled into voxels.
#[derive(Debug, Clone, PartialEq)]
pub struct Tetrahedron {
    pub base: DepthPlane,
    pub apex: DepthPlane,
    pub size_cells: usize,
    pub samples_per_edge: usize,
    pub cell_px: usize,
    pub parallax: Parallax,
}

impl Default for Tetrahedron {
    fn default() -> Self {
        Tetrahedron {
            base: DepthPlane::new(2).expect("non-zero"),
            apex: DepthPlane::new(5).expect("non-zero"),
            size_cells: 12,
            samples_per_edge: 3,
            cell_px: 20,
            parallax: Parallax::Fp,
        }
    }
}

impl Tetrahedron {
    /// Base vertices followed by the apex, in cells.
    pub fn vertices(&self) -> [(i64, i64); 4] {
        let size = self.size_cells as i64;
        let (lo, hi) = (1, size - 3);
        let base = [(lo, hi), (hi, hi), ((lo + hi) / 2, lo)];
        let cx = base.iter().map(|v| v.0).sum::<i64>() as f64 / 3.0;
        let cy = base.iter().map(|v| v.1).sum::<i64>() as f64 / 3.0;
        [base[0], base[1], base[2], (round(cx), round(cy))]
    }

    pub fn scene(&self) -> Result<SceneSpec> {
        if self.size_cells < 6 {
            return Err(Error::Scene(format!(
                "tetrahedron needs a canvas of at least 6 cells, got {}",
                self.size_cells
            )));
        }
        if self.samples_per_edge < 2 {
            return Err(Error::Scene(
                "each edge needs at least its two endpoints".into(),
            ));
        }
        if self.base == self.apex {
            return Err(Error::Scene(
                "base and apex must lie on different planes".into(),
            ));
        }
        let [a, b, c, top] = self.vertices();
        let base = self.base.get() as f64;
        let apex = self.apex.get() as f64;
        let mut voxels: Vec<(i64, i64, DepthPlane)> = vec![
            (a.0, a.1, self.base),
            (b.0, b.1, self.base),
            (c.0, c.1, self.base),
            (top.0, top.1, self.apex),
        ];
        let steps = self.samples_per_edge - 1;
        let lerp = |p: (i64, i64), q: (i64, i64), t: f64| {
            (
                round(p.0 as f64 + t * (q.0 - p.0) as f64),
                round(p.1 as f64 + t * (q.1 - p.1) as f64),
            )
        };
        for (p, q) in [(a, b), (b, c), (c, a)] {
            for k in 0..=steps {
                let (x, y) = lerp(p, q, k as f64 / steps as f64);
                voxels.push((x, y, self.base));
            }
        }
        for p in [a, b, c] {
            for k in 0..=steps {
                let t = k as f64 / steps as f64;
                let (x, y) = lerp(p, top, t);
                let depth = self.nearest_plane(base + t * (apex - base))?;
                voxels.push((x, y, depth));
            }
        }
        let mut scene = SceneSpec::new(
            self.size_cells,
            self.size_cells,
            self.cell_px,
            self.parallax,
        );
        for (x, y, d) in voxels {
            if !scene.voxels.iter().any(|v| v.cx == x && v.cy == y) {
                scene.voxels.push(Voxel::new(x, y, d, 1.0));
            }
        }
        scene.validate()?;
        Ok(scene)
    }

    /// Plane between base and apex (inclusive) closest to `depth` whose order
    /// divides the cell size; ties go to the smaller order.
    fn nearest_plane(&self, depth: f64) -> Result<DepthPlane> {
        let (lo, hi) = {
            let (b, a) = (self.base.get(), self.apex.get());
            (b.min(a), b.max(a))
        };
        (lo..=hi)
            .filter(|&d| d != 0 && self.cell_px.is_multiple_of(d.unsigned_abs() as usize))
            .min_by(|&x, &y| {
                let dx = (x as f64 - depth).abs();
                let dy = (y as f64 - depth).abs();
                dx.total_cmp(&dy)
                    .then(x.unsigned_abs().cmp(&y.unsigned_abs()))
            })
            .map(|d| DepthPlane::new(d).expect("non-zero"))
            .ok_or(Error::PlaneDivisibility {
                depth: self.base.get(),
                cell_px: self.cell_px,
            })
    }
}

fn round(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

/// The tetrahedron preset with the default cell size and parallax.
pub fn tetrahedron_scene(
    base: DepthPlane,
    apex: DepthPlane,
    size_cells: usize,
    samples_per_edge: usize,
) -> Result<SceneSpec> {
    Tetrahedron {
        base,
        apex,
        size_cells,
        samples_per_edge,
        ..Tetrahedron::default()
    }
    .scene()
}

/// A circular aperture centred on every cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskSpec {
    /// Radius in pixels.
    pub hole_radius: f64,
    pub cell_px: usize,
}

impl MaskSpec {
    pub fn new(hole_radius: f64, cell_px: usize) -> Result<Self> {
        if !(hole_radius > 0.0 && hole_radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "hole radius must be positive, got {hole_radius}"
            )));
        }
        Ok(MaskSpec {
            hole_radius,
            cell_px,
        })
    }
}

/// Blacks out pixels whose centre is farther than the hole radius from the
/// centre of their cell.
pub fn apply_vignette(image: &MultiviewImage, mask: &MaskSpec) -> Result<MultiviewImage> {
    let cp = image.cell_px();
    if mask.cell_px != cp {
        return Err(Error::InvalidArgument(format!(
            "mask cell size {} differs from the image cell size {cp}",
            mask.cell_px
        )));
    }
    let r2 = mask.hole_radius * mask.hole_radius;
    let half = cp as f64 / 2.0;
    let mut px = image.pixels().clone();
    for ((y, x), v) in px.indexed_iter_mut() {
        let dx = (x % cp) as f64 + 0.5 - half;
        let dy = (y % cp) as f64 + 0.5 - half;
        if dx * dx + dy * dy > r2 {
            *v = 0.0;
        }
    }
    MultiviewImage::new(px, cp, image.parallax())
}
