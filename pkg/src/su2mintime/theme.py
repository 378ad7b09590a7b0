"""Styling constants for every emitted figure. Change the look here only."""

SIZE = 640  # px, square canvas
MARGIN = 40  # px around the unit disk
EXTENT = 1.05  # half-width of the plotted window in disk units
FONT = "DejaVu Sans, Helvetica, Arial, sans-serif"
FONT_SIZE = 13
COORD_DIGITS = 3  # decimals of pixel coordinates

BACKGROUND = "#ffffff"
DISK_FILL = "#f7f7f7"
DISK_STROKE = "#444444"
AXIS_STROKE = "#bbbbbb"
TEXT = "#222222"

BRANCH_COLOR = {"plus": "#1f77b4", "minus": "#d62728", "zero": "#2ca02c"}
KIND_COLOR = {"border": "#7f7f7f", "identity": "#7f7f7f", "origin": "#9467bd", "junction": "#8c564b"}

# stroke width and dash pattern per segment kind; the Zero front is drawn heavier
STROKE = {
    "front": (1.6, None),
    "front_zero": (2.6, None),
    "border": (1.2, None),
    "spiral": (1.4, "2 3"),
    "junction": (1.2, "6 3"),
    "origin": (1.2, "6 3"),
    "identity": (1.0, "1 2"),
}
TRACE = {"endpoint": (1.0, "6 4"), "critical": (1.0, "1.5 3")}
TRACE_COLOR = "#555555"
TIME_OPACITY = (1.0, 0.8, 0.6, 0.45)  # successive times fade
