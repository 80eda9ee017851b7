//! Polygon to knot type: reduce, project, simplify, HOMFLY, table lookup.

use super::diagram::KnotDiagram;
use super::homfly::{HomflyEngine, DEFAULT_MAX_CROSSINGS};
use super::kauffman::KauffmanEngine;
use super::poly::LaurentPoly2;
use super::project::project;
use super::reduce::{reduce, to_p3, P3};
use super::table::{Identification, KnotTable};
use crate::error::Result;
use crate::lattice::LatticePolygon;

/// Number of regular projection directions compared per polygon.
pub const DEFAULT_PROJECTION_TRIES: usize = 3;

#[derive(Clone, Debug)]
pub struct Identifier<'t> {
    table: &'t KnotTable,
    engine: HomflyEngine,
    kauffman: KauffmanEngine,
    seed: u64,
    tries: usize,
}

impl<'t> Identifier<'t> {
    pub fn new(table: &'t KnotTable, seed: u64) -> Self {
        Self::with_budget(table, seed, DEFAULT_MAX_CROSSINGS)
    }

    pub fn with_budget(table: &'t KnotTable, seed: u64, max_crossings: usize) -> Self {
        Identifier {
            table,
            engine: HomflyEngine::new(max_crossings),
            kauffman: KauffmanEngine::new(max_crossings),
            seed,
            tries: DEFAULT_PROJECTION_TRIES,
        }
    }

    pub fn table(&self) -> &KnotTable {
        self.table
    }

    /// Simplified diagram of an already reduced closed polygon.
    pub fn diagram_of(&self, vertices: &[P3]) -> Result<KnotDiagram> {
        Ok(project(vertices, self.seed, self.tries)?.simplify())
    }

    /// HOMFLY polynomial of a closed polygon with integer vertices.
    pub fn homfly_of(&mut self, vertices: &[P3]) -> Result<LaurentPoly2> {
        let reduced = reduce(vertices);
        let d = self.diagram_of(&reduced)?;
        self.engine.homfly(&d)
    }

    /// Table lookup of the HOMFLY polynomial; an ambiguous lookup is settled
    /// by the Kauffman polynomial where the table can tell the candidates apart.
    pub fn identify_points(&mut self, vertices: &[P3]) -> Result<(Identification, LaurentPoly2)> {
        let reduced = reduce(vertices);
        self.identify_reduced(&reduced)
    }

    /// As [`Identifier::identify_points`] for a polygon that is already reduced.
    pub fn identify_reduced(&mut self, reduced: &[P3]) -> Result<(Identification, LaurentPoly2)> {
        let d = self.diagram_of(reduced)?;
        let p = self.engine.homfly(&d)?;
        let id = match self.table.identify(&p) {
            Identification::Ambiguous(ks) => {
                let f = self.kauffman.kauffman(&d)?;
                self.table.resolve(&ks, &f)
            }
            id => id,
        };
        Ok((id, p))
    }

    pub fn identify_polygon(&mut self, poly: &LatticePolygon) -> Result<(Identification, LaurentPoly2)> {
        self.identify_points(&to_p3(poly.vertices()))
    }
}
