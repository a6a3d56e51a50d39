"""Cross-sectional dynamic point cloud codec: core package."""

__version__ = "0.1.0"
