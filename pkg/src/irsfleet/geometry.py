"""Manhattan-grid microcell layout and transceiver distance tables."""

from dataclasses import dataclass

import numpy as np

__all__ = ["ScenarioLayout", "DistanceTables", "build_layout", "compute_distances"]


@dataclass(frozen=True, eq=False)
class ScenarioLayout:
    """Square-cell street grid with anchor sites at the lattice vertices.

    Cells are indexed row-major; candidate anchor sites are the distinct
    grid vertices (street corners), also row-major. The base station sits
    at the planar center of the covered area.
    """

    grid_rows: int
    grid_cols: int
    cell_side: float
    bs_position: np.ndarray        # (2,) metres
    cell_centers: np.ndarray       # (rows*cols, 2) metres
    candidate_sites: np.ndarray    # ((rows+1)*(cols+1), 2) metres
    h1: float                      # BS <-> user height difference, m
    h2: float                      # anchor <-> BS height difference, m
    h3: float                      # anchor <-> user height difference, m

    @property
    def n_grids(self) -> int:
        return self.grid_rows * self.grid_cols

    @property
    def n_sites(self) -> int:
        return (self.grid_rows + 1) * (self.grid_cols + 1)

    def grid_row_col(self, grid_index: int) -> tuple[int, int]:
        return divmod(int(grid_index), self.grid_cols)


def build_layout(
    rows: int,
    cols: int,
    cell_side: float,
    heights: tuple[float, float, float],
) -> ScenarioLayout:
    """Lay out a rows x cols grid of square cells with the BS at the center.

    `heights` is the (BS-user, site-BS, site-user) height-difference triple
    in metres. Raises ValueError on non-positive dimensions.
    """
    h1, h2, h3 = (float(h) for h in heights)
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be at least 1x1")
    if cell_side <= 0:
        raise ValueError("cell side must be positive")
    if min(h1, h2, h3) <= 0:
        raise ValueError("height differences must be positive")

    side = float(cell_side)
    cx = (np.arange(cols) + 0.5) * side
    cy = (np.arange(rows) + 0.5) * side
    gy, gx = np.meshgrid(cy, cx, indexing="ij")
    centers = np.column_stack([gx.ravel(), gy.ravel()])

    vx = np.arange(cols + 1) * side
    vy = np.arange(rows + 1) * side
    sy, sx = np.meshgrid(vy, vx, indexing="ij")
    sites = np.column_stack([sx.ravel(), sy.ravel()])

    bs = np.array([cols * side / 2.0, rows * side / 2.0])
    return ScenarioLayout(
        grid_rows=int(rows),
        grid_cols=int(cols),
        cell_side=side,
        bs_position=bs,
        cell_centers=centers,
        candidate_sites=sites,
        h1=h1,
        h2=h2,
        h3=h3,
    )


@dataclass(frozen=True, eq=False)
class DistanceTables:
    """All link distances needed by the channel model, in metres."""

    l_bs_ut: np.ndarray     # (I,)  3-D BS to user (height diff h1)
    r_bs_site: np.ndarray   # (J,)  3-D BS to anchor site (height diff h2)
    d_site_ut: np.ndarray   # (I, J) 3-D anchor site to user (height diff h3)
    d2_bs_ut: np.ndarray    # (I,)  planar BS to user


def compute_distances(layout: ScenarioLayout) -> DistanceTables:
    """Populate every pairwise distance table for a layout."""
    centers = layout.cell_centers
    sites = layout.candidate_sites
    bs = layout.bs_position

    d2 = np.hypot(centers[:, 0] - bs[0], centers[:, 1] - bs[1])
    l_bs_ut = np.hypot(d2, layout.h1)
    r2 = np.hypot(sites[:, 0] - bs[0], sites[:, 1] - bs[1])
    r_bs_site = np.hypot(r2, layout.h2)
    diff = centers[:, None, :] - sites[None, :, :]
    planar = np.hypot(diff[..., 0], diff[..., 1])
    d_site_ut = np.hypot(planar, layout.h3)
    return DistanceTables(
        l_bs_ut=l_bs_ut,
        r_bs_site=r_bs_site,
        d_site_ut=d_site_ut,
        d2_bs_ut=d2,
    )
