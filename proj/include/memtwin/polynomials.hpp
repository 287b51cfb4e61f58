#pragma once

// Classical orthogonal polynomials needed by the Fock-space channel
// constructors: Jacobi (beamsplitter matrix elements) and generalized
// Laguerre (amplified-coherent-state closed forms).

namespace memtwin {

// Jacobi polynomial P_n^{(a,b)}(x) for integer parameters a, b, which may be
// negative as they arise in Fock-space beamsplitter matrix elements.
//
// Negative integer parameters are removed with the reduction identities
//   P_n^{(-mu,b)}(x) = [(n-mu)!/n!] [(n+b)!/(n+b-mu)!]
//                      ((x-1)/2)^mu P_{n-mu}^{(mu,b)}(x),       mu >= 1,
//   P_n^{(a,-nu)}(x) = [(n-nu)!/n!] [(n+a)!/(n+a-nu)!]
//                      ((x+1)/2)^nu P_{n-nu}^{(a,nu)}(x),       nu >= 1,
// after which the three-term recurrence in n applies.  Double precision is
// ample for the small degrees (n <= ~20) a truncated-Fock lift needs.
//
// Preconditions: n >= 0, n + a >= 0, n + b >= 0, n + a + b >= 0.
double jacobi_polynomial(int n, int a, int b, double x);

// Generalized Laguerre polynomial L_n^{(m)}(x), m >= 0, via the three-term
// recurrence (k+1) L_{k+1} = (2k+1+m-x) L_k - (k+m) L_{k-1}.
double generalized_laguerre(int n, int m, double x);

}  // namespace memtwin
