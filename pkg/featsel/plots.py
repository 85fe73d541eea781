"""Line charts of experiment results, saved as SVG with matplotlib.

Figures are built with :class:`matplotlib.figure.Figure` directly, so no pyplot state or GUI
backend is involved. SVG output leaves out the creation date and uses a fixed hash salt for
its element ids: the same data gives the same bytes.
"""

from collections import namedtuple

import matplotlib
from matplotlib.figure import Figure

SVG_RC = {
    'svg.hashsalt': 'featsel',
    # Text stays text instead of glyph paths.
    'svg.fonttype': 'none',
}

Series = namedtuple('Series', 'points steps markers')

class LineChart(object):
    """One set of axes with any number of line series.

    ``xrange`` and ``yrange`` fix the axis limits as ``(lo, hi)``; None lets matplotlib fit
    the data.
    """
    def __init__(self, title, xlabel, ylabel, xrange=None, yrange=None, size=(6.4, 4.0)):
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.xrange = xrange
        self.yrange = yrange
        self.size = size
        self.series = []

    #--- Public
    def add_series(self, points, steps=False, markers=False):
        # steps draws a right-continuous step function (ECDF style).
        series = Series([(float(x), float(y)) for x, y in points], steps, markers)
        self.series.append(series)
        return series

    def figure(self):
        fig = Figure(figsize=self.size)
        ax = fig.subplots()
        for series in self.series:
            if not series.points:
                continue
            xs, ys = zip(*series.points)
            ax.plot(xs, ys, color='#1f4e99', linewidth=1.5,
                drawstyle='steps-post' if series.steps else 'default',
                marker='o' if series.markers else None, markersize=3)
        ax.set_title(self.title)
        ax.set_xlabel(self.xlabel)
        ax.set_ylabel(self.ylabel)
        if self.xrange is not None:
            ax.set_xlim(*self.xrange)
        if self.yrange is not None:
            ax.set_ylim(*self.yrange)
        ax.grid(True, linewidth=0.5, alpha=0.5)
        return fig

    def save(self, path):
        fig = self.figure()
        with matplotlib.rc_context(SVG_RC):
            fig.savefig(path, format='svg', metadata={'Date': None})
        return path
