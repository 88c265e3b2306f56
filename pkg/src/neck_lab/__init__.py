"""
Neck-Lab: numerical laboratory for necks, cylinders and solitons in Ricci flow.

This package turns the quantitative claims about ancient neck regions into
reproducible numerical checks, each reported as a pass/fail case.

Philosophy: "Exact where possible, measured where not"
- Sphere calculus is exact polynomial algebra; quadrature is a fallback
- Every measurement carries its tolerance and the statement it checks

Modules:
    core: Domain types and exceptions
    curvature: Curvature operators, PIC cones and pinching
    flows: Shrinking cylinders, warped products, the Bryant soliton
    heat: Dirichlet heat kernel, Crank-Nicolson and representation formula
    spectral: Lichnerowicz mode system, growth rates and profiles
    sphere: Polynomial calculus on spheres, rotation families, alignment
    foliation: CMC leaves, Jacobi lapse and Gram evolution
    symmetry: Symmetry deficits and their improvement along a neck
    suites, reporting, inputs: Runner, report.json and run configuration
"""

__version__ = "0.1.0"
