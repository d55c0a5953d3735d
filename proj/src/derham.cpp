#include "iga/derham.hpp"

#include <cassert>

namespace iga {

DeRhamSpaces DeRhamSpaces::make(int p, int r, int n) {
    assert(p >= 1 && r >= 0 && r <= p - 1);
    DeRhamSpaces s;
    s.p = p;
    s.r = r;
    s.n = n;
    auto kv = [&](int deg, int reg) { return KnotVector::uniform(deg, n, reg); };
    s.scalar = {kv(p, r), kv(p, r)};
    s.flux1 = {kv(p, r), kv(p - 1, r - 1)};
    s.flux2 = {kv(p - 1, r - 1), kv(p, r)};
    s.density = {kv(p - 1, r - 1), kv(p - 1, r - 1)};
    if (r <= p - 2) s.pressure = {kv(p - 1, r), kv(p - 1, r)};
    return s;
}

GeomData geom_at(const GeometryMap& F, const Vec2& z) {
    GeomData g;
    g.x = F.map(z);
    g.J = F.jacobian(z);
    g.adj = adjugate(g.J);
    g.det = g.J.determinant();
    g.dJ = F.jacobian_partials(z);
    for (int k = 0; k < 2; ++k) g.dadj[k] = adjugate(g.dJ[k]);
    return g;
}

}  // namespace iga
