"""
Artifact writers for region rasters: CSV, SVG and PNG

Each cell is painted with the color of its topmost layer. Layers, bottom to
top, and their fixed colors:

    outside      #d9d9d9   ωα ≤ 0
    positive     #fdd0a2   ωα > 0 only
    theorem      #c6dbef   stable by a main theorem
    transformed  #9ecae1   stable through the transformed conditions
    twisted      #6baed6   twisted ample
    thm1         #2171b5   positivity, volume and twisted ampleness

Rows are drawn with V increasing upward.
"""

import csv
import io
import xml.etree.ElementTree as ET
from typing import List, Optional, Tuple

import numpy as np
from PIL import Image

from .lattice import format_rational
from .regions import RegionLabel, RegionRaster

PALETTE: List[Tuple[str, str]] = [
    ("outside", "#d9d9d9"),
    ("positive", "#fdd0a2"),
    ("theorem", "#c6dbef"),
    ("transformed", "#9ecae1"),
    ("twisted", "#6baed6"),
    ("thm1", "#2171b5"),
]

CSV_COLUMNS = ["D", "V", "positive", "volume_ok", "twisted_ample", "thm1", "case", "theorem"]

RASTER_FORMATS = ("csv", "svg", "png")

SVG_CELL = 4


def cell_layer(label: RegionLabel) -> str:
    """Name of the topmost palette layer the label belongs to"""
    if label.thm1_stable:
        return "thm1"
    if label.twisted_ample:
        return "twisted"
    if label.transform_case_stable:
        return "transformed"
    if label.theorem_region_stable:
        return "theorem"
    if label.positive:
        return "positive"
    return "outside"


def _rgb(color: str) -> Tuple[int, int, int]:
    return tuple(int(color[i:i + 2], 16) for i in (1, 3, 5))


def raster_to_csv(raster: RegionRaster) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for label in raster.cells():
        writer.writerow(label.to_row())
    return buffer.getvalue()


def raster_to_svg(raster: RegionRaster, cell: int = SVG_CELL) -> str:
    """
    Render the raster as one <g> per palette layer, in palette order

    Args:
        raster: Classified grid
        cell: Pixel size of one cell

    Returns:
        SVG document text; identical rasters give identical text
    """
    width, height = raster.nx * cell, raster.ny * cell
    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(width),
        "height": str(height),
        "viewBox": f"0 0 {width} {height}",
    })
    window = raster.window
    ET.SubElement(root, "title").text = (
        f"e={format_rational(raster.surface.e)} D_alpha={format_rational(raster.d_alpha)} "
        f"D in [{format_rational(window.d_min)}, {format_rational(window.d_max)}] "
        f"V in [{format_rational(window.v_min)}, {format_rational(window.v_max)}]"
    )
    groups = {name: ET.SubElement(root, "g", {"id": f"layer-{name}", "fill": color})
              for name, color in PALETTE}
    for j, row in enumerate(raster.rows):
        y = (raster.ny - 1 - j) * cell
        for i, label in enumerate(row):
            ET.SubElement(groups[cell_layer(label)], "rect", {
                "x": str(i * cell), "y": str(y), "width": str(cell), "height": str(cell),
            })
    return ET.tostring(root, encoding="unicode")


def raster_to_array(raster: RegionRaster) -> np.ndarray:
    """(ny, nx, 3) uint8 image, top row = largest V"""
    colors = {name: _rgb(color) for name, color in PALETTE}
    pixels = np.zeros((raster.ny, raster.nx, 3), dtype=np.uint8)
    for j, row in enumerate(raster.rows):
        for i, label in enumerate(row):
            pixels[raster.ny - 1 - j, i] = colors[cell_layer(label)]
    return pixels


def raster_to_png(raster: RegionRaster) -> bytes:
    buffer = io.BytesIO()
    Image.fromarray(raster_to_array(raster), "RGB").save(buffer, format="PNG")
    return buffer.getvalue()


def render(raster: RegionRaster, output_format: str) -> bytes:
    """
    Encode a raster

    Raises:
        ValueError: If the format is not csv, svg or png
    """
    if output_format == "csv":
        return raster_to_csv(raster).encode("utf-8")
    if output_format == "svg":
        return raster_to_svg(raster).encode("utf-8")
    if output_format == "png":
        return raster_to_png(raster)
    raise ValueError(f"Unsupported raster format: {output_format}")


def raster_format(path: str, output_format: Optional[str] = None) -> str:
    """
    Artifact format for a path: the explicit format, else the file extension

    Raises:
        ValueError: If the resolved format is not csv, svg or png
    """
    fmt = output_format or (path.rsplit(".", 1)[-1].lower() if "." in path else "")
    if fmt not in RASTER_FORMATS:
        raise ValueError(f"Unsupported raster format for {path}: '{fmt}'. "
                         f"Available formats: {', '.join(RASTER_FORMATS)}")
    return fmt


def write_raster(raster: RegionRaster, path: str, output_format: Optional[str] = None) -> str:
    """
    Write a raster to disk; the format defaults to the file extension

    Returns:
        The path written
    """
    fmt = raster_format(path, output_format)
    with open(path, "wb") as f:
        f.write(render(raster, fmt))
    return path
