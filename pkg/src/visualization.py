# src/visualization.py
import logging
import os
from typing import Optional, Tuple

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from config.config import DEFAULT_RESOLUTION, MAX_RESOLUTION, MIN_RESOLUTION, OUTPUT_DIR
from src.exceptions import ConfigError
from src.model import SQRT3, inside_model, points_to_triples
from src.predicates import EventDescriptor, evaluate

logger = logging.getLogger(__name__)

SUPERSAMPLE = 2
ROW_BLOCK = 256


class RegionPlotter:
    def __init__(self, output_dir: str = OUTPUT_DIR):
        """Initialize plotter with output directory."""
        self.output_dir = output_dir

    def _ensure_output_dir(self, path: str):
        """Ensure the directory of the target file exists."""
        directory = os.path.dirname(path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)

    def rasterize(self, event: EventDescriptor, resolution: int = DEFAULT_RESOLUTION) -> Tuple[np.ndarray, float]:
        """
        Coverage of the event over a resolution x resolution pixel grid on the
        bounding box of the model triangle, with 2x2 subsamples per pixel.

        Args:
            event: Event whose region is drawn
            resolution: Pixels per axis

        Returns:
            Tuple (coverage grid indexed [row, column], fraction of the
            triangle's subsamples inside the region)
        """
        if not MIN_RESOLUTION <= resolution <= MAX_RESOLUTION:
            raise ConfigError(f"resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], got {resolution}")
        fine = resolution * SUPERSAMPLE
        xs = -1.0 + (np.arange(fine) + 0.5) * (2.0 / fine)
        ys = (np.arange(fine) + 0.5) * (SQRT3 / fine)
        hits = np.zeros((fine, fine), dtype=bool)
        inside_total = 0

        for start in range(0, fine, ROW_BLOCK):
            y, x = np.meshgrid(ys[start:start + ROW_BLOCK], xs, indexing='ij')
            inside = inside_model(x, y)
            inside_total += int(inside.sum())
            alpha, beta, gamma = points_to_triples(x[inside], y[inside])
            mask, _ = evaluate(event, alpha, beta, gamma)
            block = np.zeros(inside.shape, dtype=bool)
            block[inside] = mask
            hits[start:start + ROW_BLOCK] = block

        coverage = hits.reshape(resolution, SUPERSAMPLE, resolution, SUPERSAMPLE).mean(axis=(1, 3))
        fraction = float(hits.sum()) / inside_total if inside_total else 0.0
        return coverage, fraction

    def plot_region(self, event: EventDescriptor, resolution: int = DEFAULT_RESOLUTION,
                    path: Optional[str] = None) -> Tuple[str, float]:
        """
        Draw the event's region in the model triangle as an SVG.
        Returns the file path and the region's share of the triangle's area.
        """
        coverage, fraction = self.rasterize(event, resolution)
        if path is None:
            path = os.path.join(self.output_dir, f"{event.interpretation.value}_{event.predicate.value}.svg")
        self._ensure_output_dir(path)

        centers_x = -1.0 + (np.arange(resolution) + 0.5) * (2.0 / resolution)
        centers_y = (np.arange(resolution) + 0.5) * (SQRT3 / resolution)

        fig, ax = plt.subplots(figsize=(6, 6 * SQRT3 / 2))
        if coverage.max() >= 0.5:
            ax.contourf(centers_x, centers_y, coverage, levels=[0.5, 1.01], colors=['#4A90E2'], alpha=0.8)
        ax.plot([-1.0, 1.0, 0.0, -1.0], [0.0, 0.0, SQRT3, 0.0], color='black', linewidth=1.2)
        ax.set_title(f"{event.label}: {event.predicate.value} (area ratio {fraction:.4f})")
        ax.set_aspect('equal')
        ax.set_xlim(-1.05, 1.05)
        ax.set_ylim(-0.05, SQRT3 + 0.05)
        ax.axis('off')
        fig.savefig(path, format='svg', bbox_inches='tight')
        plt.close(fig)

        logger.info("Wrote %s region to %s", event, path)
        return path, fraction
