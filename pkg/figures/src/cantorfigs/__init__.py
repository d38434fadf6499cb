from .render import FigureError, FigureSpec, build_figure, render

__all__ = ["FigureError", "FigureSpec", "build_figure", "render"]
