"""Python bindings for the quadric verification toolkit.

Everything lives in the native extension ``gzkit._gzkit``; this package
re-exports its entire public surface.  Build the extension with CMake (the
default top-level build places it next to this file under
``<build>/python/gzkit``) and put that directory on ``PYTHONPATH``.

Quick tour::

    import gzkit

    t = gzkit.builtin_quadric_table(3)
    assert gzkit.validate_table(t) == []
    spectrum = gzkit.c1_spectrum(t, 1.0)

    points, stats = gzkit.find_critical_points(3, starts=200, seed=1)
    nonzero = [z for z in spectrum if abs(z) > 1e-8]
    assert gzkit.spectrum_match_distance(points, nonzero) < 1e-8

    cert = gzkit.quadric_certificate(3)
    assert cert.separated
"""

from ._gzkit import *  # noqa: F401,F403
from ._gzkit import __doc__ as _core_doc

__version__ = "1.0.0"

if __doc__ and _core_doc:
    __doc__ = __doc__ + "\n" + _core_doc
