# Dense reference values for the two-qubit deuteron Hamiltonian.
# Output at time of writing:
#   eigvalsh -> [-1.74886491e+00, 2.9e-04, 1.18137100e+01, 1.35628649e+01]
#   argmin theta = 0.5942779101145146, E_min = -1.7488649141752755
#   E(0) = -0.43629, <00|H|00> = 0.00029, local minima on 0.01 scan: 1
import numpy as np
I=np.eye(2); X=np.array([[0,1],[1,0]]); Y=np.array([[0,-1j],[1j,0]]); Z=np.diag([1,-1])
# qubit 0 = least significant bit -> kron(op_q1, op_q0)
k=lambda a,b: np.kron(b,a)  # a on q0, b on q1
H=5.907*np.eye(4) - 2.1433*k(X,X) - 2.1433*k(Y,Y) + 0.21829*k(Z,I) - 6.125*k(I,Z)
w=np.linalg.eigvalsh(H); print(repr(w))
def state(t):
    s=np.zeros(4,complex); s[1]=np.cos(t/2); s[2]=np.sin(t/2); return s
E=lambda t: np.real(np.conj(state(t))@H@state(t))
ts=np.arange(-np.pi,np.pi,0.01); es=[E(t) for t in ts]; print(ts[np.argmin(es)], min(es))
from scipy.optimize import minimize_scalar
r=minimize_scalar(E,bracket=(0,0.6,1.2),tol=1e-14); print(repr(r.x), repr(r.fun))
print("E(0)",repr(E(0)), "E00", H[0,0].real)
# local minima count on scan
es=np.array(es); n=len(es); print("local minima:", sum(1 for i in range(n) if es[i]<es[i-1] and es[i]<es[(i+1)%n]))
