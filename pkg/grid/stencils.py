# stencils.py
"""
Differenze finite del secondo ordine sulla griglia uniforme.
Nodi interni: stencil centrati; anello di bordo: stencil unilaterali o traslati,
così che ogni campo derivato sia definito su tutta la griglia.
"""

import numpy as np

from grid.fields import ScalarField, SymMatField, VectorField2


class FiniteDifferences:
    """Classe centralizzata per gli operatori discreti su ScalarField"""

    @staticmethod
    def gradient_arrays(values: np.ndarray, h: float):
        """(u_1, u_2): centrate all'interno, unilaterali del secondo ordine sul bordo"""
        d_dy, d_dx = np.gradient(values, h, edge_order=2)
        return d_dx, d_dy

    @staticmethod
    def hessian_arrays(values: np.ndarray, h: float):
        """(u_11, u_12, u_22) con stencil a 3 punti e stencil incrociato a 4 angoli"""
        inv_h2 = 1.0 / (h * h)

        a11 = np.empty_like(values)
        a11[:, 1:-1] = (values[:, 2:] - 2.0 * values[:, 1:-1] + values[:, :-2]) * inv_h2
        a11[:, 0] = a11[:, 1]
        a11[:, -1] = a11[:, -2]

        a22 = np.empty_like(values)
        a22[1:-1, :] = (values[2:, :] - 2.0 * values[1:-1, :] + values[:-2, :]) * inv_h2
        a22[0, :] = a22[1, :]
        a22[-1, :] = a22[-2, :]

        # all'interno coincide con (f[j+1,i+1] - f[j+1,i-1] - f[j-1,i+1] + f[j-1,i-1]) / 4h^2
        d_dx = np.gradient(values, h, axis=1, edge_order=2)
        a12 = np.gradient(d_dx, h, axis=0, edge_order=2)
        return a11, a12, a22

    @staticmethod
    def gradient(f: ScalarField) -> VectorField2:
        d_dx, d_dy = FiniteDifferences.gradient_arrays(f.values, f.grid.h)
        return VectorField2(f.grid, d_dx, d_dy)

    @staticmethod
    def hessian(f: ScalarField) -> SymMatField:
        a11, a12, a22 = FiniteDifferences.hessian_arrays(f.values, f.grid.h)
        return SymMatField(f.grid, a11, a12, a22)

    @staticmethod
    def laplacian(f: ScalarField) -> ScalarField:
        hess = FiniteDifferences.hessian(f)
        return ScalarField(f.grid, hess.trace())

    @staticmethod
    def infinity_laplacian(f: ScalarField) -> ScalarField:
        """u_i u_j u_ij composto dagli stessi gradiente e hessiana"""
        grad = FiniteDifferences.gradient(f)
        hess = FiniteDifferences.hessian(f)
        return ScalarField(f.grid, FiniteDifferences.contract(hess, grad))

    @staticmethod
    def contract(hess: SymMatField, grad: VectorField2) -> np.ndarray:
        g1, g2 = grad.v1, grad.v2
        return g1 * g1 * hess.a11 + 2.0 * g1 * g2 * hess.a12 + g2 * g2 * hess.a22


# Funzioni di utilità per accesso rapido
def gradient(f: ScalarField) -> VectorField2:
    return FiniteDifferences.gradient(f)


def hessian(f: ScalarField) -> SymMatField:
    return FiniteDifferences.hessian(f)


def laplacian(f: ScalarField) -> ScalarField:
    return FiniteDifferences.laplacian(f)


def infinity_laplacian(f: ScalarField) -> ScalarField:
    return FiniteDifferences.infinity_laplacian(f)
