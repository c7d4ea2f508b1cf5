//! Everything a surface-level trace needs, computed once.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::par::Exec;
use crate::qtorus::TorusPresentation;
use crate::structmat::{SurfaceMatrices, Transition};
use crate::surface::{SlotRef, TriangulatedSurface};

#[derive(Clone, Debug)]
pub struct SurfaceContext {
    pub n: i64,
    pub surface: TriangulatedSurface,
    pub matrices: SurfaceMatrices,
    /// `ψ̄` between the reduced A- and X-tori.
    pub reduced: Transition,
    /// `ψ` between the extended A- and X-tori.
    pub extended: Transition,
    /// Boundary slot of `S` → attached face of `S*`.
    pub attached: HashMap<SlotRef, usize>,
}

impl SurfaceContext {
    pub fn new(s: &TriangulatedSurface, n: i64) -> Result<Self> {
        Self::new_with(s, n, Exec::default())
    }

    pub fn new_with(s: &TriangulatedSurface, n: i64, exec: Exec) -> Result<Self> {
        let matrices = SurfaceMatrices::new_with(s, n, exec)?;
        let reduced = Transition::reduced(s, n)?;
        let extended = Transition::extended(&matrices)?;
        let ext = &matrices.sets.extended_surface;
        let attached = (0..ext.num_faces())
            .filter_map(|t| ext.attached_to(t).map(|slot| (slot, t)))
            .collect();
        Ok(Self {
            n,
            surface: s.clone(),
            matrices,
            reduced,
            extended,
            attached,
        })
    }

    pub fn reduced_torus(&self) -> &Arc<TorusPresentation> {
        self.reduced.x_torus()
    }

    pub fn extended_torus(&self) -> &Arc<TorusPresentation> {
        self.extended.x_torus()
    }

    pub fn extended_surface(&self) -> &TriangulatedSurface {
        &self.matrices.sets.extended_surface
    }
}
