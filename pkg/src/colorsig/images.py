"""Image decoding to row-major RGB pixel grids.

PNG, JPEG, and BMP are decoded through Pillow. ASCII PPM (P3) gets its
own parser so test fixtures decode bit-exactly with no library in the
loop; a P3 writer is provided for generating such fixtures.
"""

import numpy as np

from .errors import CorruptFile, UnsupportedFormat

_MAGICS = (
    (b"\x89PNG\r\n\x1a\n", "png"),
    (b"\xff\xd8", "jpeg"),
    (b"BM", "bmp"),
    (b"P3", "ppm"),
)


def _sniff_format(head: bytes) -> str | None:
    for magic, name in _MAGICS:
        if head.startswith(magic):
            return name
    return None


def _parse_ppm_p3(data: bytes, path) -> np.ndarray:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise CorruptFile(f"{path}: P3 data is not ASCII") from exc
    # Strip comments (# to end of line), then tokenize on whitespace.
    lines = [line.split("#", 1)[0] for line in text.split("\n")]
    tokens = " ".join(lines).split()
    if not tokens or tokens[0] != "P3":
        raise CorruptFile(f"{path}: missing P3 magic")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
        samples = [int(t) for t in tokens[4:]]
    except ValueError as exc:
        raise CorruptFile(f"{path}: non-numeric token in PPM") from exc
    if width <= 0 or height <= 0:
        raise CorruptFile(f"{path}: bad dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise CorruptFile(f"{path}: maxval {maxval} out of range")
    if len(samples) != width * height * 3:
        raise CorruptFile(
            f"{path}: expected {width * height * 3} samples, found {len(samples)}"
        )
    values = np.array(samples, dtype=np.int64)
    if values.min() < 0 or values.max() > maxval:
        raise CorruptFile(f"{path}: sample outside [0, {maxval}]")
    if maxval != 255:
        # Linear rescale to [0, 255], rounding half up in exact integer math.
        values = (values * 510 + maxval) // (2 * maxval)
    return values.astype(np.uint8).reshape(height, width, 3)


def decode_image(path) -> np.ndarray:
    """Decode an image file into a (height, width, 3) uint8 RGB array.

    Raises UnsupportedFormat for files that are none of PNG/JPEG/BMP/P3,
    and CorruptFile for unreadable or malformed files.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise CorruptFile(f"cannot read {path}: {exc}") from exc
    fmt = _sniff_format(data[:8])
    if fmt is None:
        raise UnsupportedFormat(f"{path}: not a PNG, JPEG, BMP, or ASCII PPM (P3) file")
    if fmt == "ppm":
        return _parse_ppm_p3(data, path)

    import io

    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(io.BytesIO(data)) as img:
            rgb = img.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise CorruptFile(f"{path}: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.size == 0:
        raise CorruptFile(f"{path}: decoder produced no RGB pixels")
    return arr


def write_ppm(path, pixels: np.ndarray) -> None:
    """Write a (height, width, 3) uint8 array as an ASCII PPM (P3) file."""
    arr = np.asarray(pixels, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError("pixels must have shape (height, width, 3)")
    height, width = arr.shape[:2]
    rows = [f"P3\n{width} {height}\n255"]
    for row in arr.reshape(height, width * 3):
        rows.append(" ".join(str(int(v)) for v in row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")
