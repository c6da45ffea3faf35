"""Named color palettes and nearest-color pixel quantization.

A palette is an ordered list of named colors; its order fixes the bin
order of every histogram and signature built from it. Pixels are mapped
to the nearest palette color either in RGB (plain Euclidean) or in HSV
(circular hue distance, weighted), with ties resolved toward the lowest
palette index so the mapping is deterministic.
"""

import json
from dataclasses import dataclass, field

import numpy as np

COLORSPACES = ("rgb", "hsv")

# Weights for the (hue/180, saturation, value) components of the HSV metric.
_HSV_WEIGHTS = (2.0, 1.0, 1.0)


def rgb_to_hsv(pixels: np.ndarray) -> np.ndarray:
    """Convert RGB values in [0, 255] to (hue degrees, saturation, value).

    Accepts an (..., 3) array and returns an array of the same shape with
    hue in [0, 360), saturation and value in [0, 1]. Matches the standard
    hexcone conversion (``colorsys.rgb_to_hsv``) component for component.
    """
    rgb = np.asarray(pixels, dtype=np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    rangec = maxc - minc

    v = maxc
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(maxc > 0.0, rangec / maxc, 0.0)
        rc = (maxc - r) / rangec
        gc = (maxc - g) / rangec
        bc = (maxc - b) / rangec
        h = np.where(r == maxc, bc - gc, np.where(g == maxc, 2.0 + rc - bc, 4.0 + gc - rc))
        h = np.mod(h / 6.0, 1.0)
    h = np.where(rangec == 0.0, 0.0, h)
    s = np.where(rangec == 0.0, 0.0, s)
    return np.stack([h * 360.0, s, v], axis=-1)


@dataclass(frozen=True)
class PaletteColor:
    """One named palette color with its RGB and derived HSV coordinates."""

    name: str
    rgb: tuple[int, int, int]
    hsv: tuple[float, float, float] = field(init=False)

    def __post_init__(self):
        r, g, b = self.rgb
        if not all(isinstance(c, int) and 0 <= c <= 255 for c in (r, g, b)):
            raise ValueError(f"rgb components must be integers in [0, 255], got {self.rgb!r}")
        h, s, v = rgb_to_hsv(np.array(self.rgb, dtype=np.float64))
        object.__setattr__(self, "hsv", (float(h), float(s), float(v)))


class Palette:
    """Ordered, immutable set of named colors; order defines bin order."""

    def __init__(self, colors: list[PaletteColor]):
        if len(colors) < 2:
            raise ValueError("a palette needs at least two colors")
        names = [c.name for c in colors]
        if len(set(names)) != len(names):
            raise ValueError("palette color names must be unique")
        self.colors = tuple(colors)
        # Coordinate tables used by the vectorized quantizer.
        self._rgb = np.array([c.rgb for c in colors], dtype=np.float64)
        self._hsv = np.array([c.hsv for c in colors], dtype=np.float64)
        self._rgb.flags.writeable = False
        self._hsv.flags.writeable = False

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, i: int) -> PaletteColor:
        return self.colors[i]

    def index_of(self, name: str) -> int:
        for i, c in enumerate(self.colors):
            if c.name == name:
                return i
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.colors)


# Fixed coordinates for the 16 standard colors. Implementation constants;
# override by loading a palette config file.
DEFAULT_PALETTE_TABLE = [
    ("BLACK", (0, 0, 0)),
    ("SILVER", (192, 192, 192)),
    ("WHITE", (255, 255, 255)),
    ("GRAY", (128, 128, 128)),
    ("RED", (255, 0, 0)),
    ("ORANGE", (255, 165, 0)),
    ("YELLOW", (255, 255, 0)),
    ("LIME", (0, 255, 0)),
    ("GREEN", (0, 128, 0)),
    ("TURQUOISE", (64, 224, 208)),
    ("CYAN", (0, 255, 255)),
    ("OCEAN", (0, 119, 190)),
    ("BLUE", (0, 0, 255)),
    ("VIOLET", (238, 130, 238)),
    ("MAGENTA", (255, 0, 255)),
    ("RASPBERRY", (227, 11, 92)),
]

DEFAULT_PALETTE = Palette([PaletteColor(name, rgb) for name, rgb in DEFAULT_PALETTE_TABLE])


def load_palette(path) -> Palette:
    """Load a palette from a JSON array of ``{"name": ..., "rgb": [r, g, b]}``.

    Array order becomes bin order.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise ValueError("palette config must be a JSON array")
    colors = []
    for item in raw:
        try:
            name = item["name"]
            r, g, b = item["rgb"]
        except (TypeError, KeyError, ValueError) as exc:
            raise ValueError(f"bad palette entry {item!r}") from exc
        colors.append(PaletteColor(str(name), (int(r), int(g), int(b))))
    return Palette(colors)


def _hue_delta(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Circular hue difference in degrees, in [0, 180]."""
    d = np.abs(a - b)
    return np.minimum(d, 360.0 - d)


def _squared_distances(pixels: np.ndarray, palette: Palette, space: str) -> np.ndarray:
    """Squared distance from each pixel to each palette color, shape (P, n)."""
    if space == "rgb":
        pix = np.asarray(pixels, dtype=np.float64)
        diff = pix[:, None, :] - palette._rgb[None, :, :]
        return np.einsum("pnc,pnc->pn", diff, diff)
    if space == "hsv":
        pix = rgb_to_hsv(np.asarray(pixels, dtype=np.float64))
        pal = palette._hsv
        wh, ws, wv = _HSV_WEIGHTS
        dh = _hue_delta(pix[:, None, 0], pal[None, :, 0]) / 180.0
        ds = pix[:, None, 1] - pal[None, :, 1]
        dv = pix[:, None, 2] - pal[None, :, 2]
        return wh * dh * dh + ws * ds * ds + wv * dv * dv
    raise ValueError(f"unknown colorspace {space!r}; expected one of {COLORSPACES}")


def quantize_pixels(pixels: np.ndarray, palette: Palette, space: str = "hsv") -> np.ndarray:
    """Map an array of RGB pixels (P, 3) to palette indices (P,).

    Ties go to the lowest palette index (argmin keeps the first minimum).
    """
    pixels = np.asarray(pixels).reshape(-1, 3)
    if pixels.shape[0] == 0:
        return np.zeros(0, dtype=np.intp)
    # Chunk so the (P, n) distance matrix stays a few MB at most.
    chunk = max(1, 2_000_000 // max(len(palette), 1))
    out = np.empty(pixels.shape[0], dtype=np.intp)
    for start in range(0, pixels.shape[0], chunk):
        stop = start + chunk
        out[start:stop] = np.argmin(_squared_distances(pixels[start:stop], palette, space), axis=1)
    return out


def quantize_pixel(pixel, palette: Palette, space: str = "hsv") -> int:
    """Index of the palette color nearest to one RGB pixel."""
    return int(quantize_pixels(np.asarray(pixel, dtype=np.float64).reshape(1, 3), palette, space)[0])
