#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "slopelab/tropical.hpp"

using namespace slopelab;

namespace {

RatMatrix rat2(Rational a, Rational b, Rational c, Rational d) {
    RatMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

RatMatrix hexagonal() { return rat2(Rational(2), Rational(1), Rational(1), Rational(2)); }

} // namespace

TEST_CASE("GramLattice validation") {
    CHECK_THROWS_AS(GramLattice(rat2(Rational(1), Rational(2), Rational(3), Rational(4))),
                    validation_error);  // not symmetric
    CHECK_THROWS_AS(GramLattice(rat2(Rational(1), Rational(2), Rational(2), Rational(1))),
                    validation_error);  // indefinite
    CHECK_NOTHROW(GramLattice(hexagonal()));
}

TEST_CASE("cycle Gram matrices of basic graphs") {
    auto loop = make_graph({{"p", 1}}, {{"l", "p", "p", Rational(5, 2)}});
    auto gl = cycle_gram(loop);
    CHECK(gl.dim() == 1);
    CHECK(gl.Z(0, 0) == Rational(5, 2));

    Rational m1(1), m2(2), m3(3, 2);
    auto theta = make_graph({{"u", 0}, {"v", 0}},
                            {{"e1", "u", "v", m1}, {"e2", "u", "v", m2}, {"e3", "u", "v", m3}});
    auto gt = cycle_gram(theta);
    CHECK(exact_det(gt.Z) == m1 * m2 + m1 * m3 + m2 * m3);
    // Moment is a lattice invariant, so any Gram matrix of the same pairing
    // gives the same value; compare with the tree = {e3} basis of the spec.
    RatMatrix alt = rat2(m1 + m3, m3, m3, m2 + m3);
    CHECK(moment(gt) == moment(GramLattice(alt)));

    auto seg = make_graph({{"a", 1}, {"b", 1}}, {{"e", "a", "b", Rational(1)}});
    CHECK_THROWS_AS(cycle_gram(seg), validation_error);  // tree graph
}

TEST_CASE("K4 determinant counts spanning trees") {
    auto k4 = make_graph({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}},
                         {{"e1", "a", "b", Rational(1)},
                          {"e2", "a", "c", Rational(1)},
                          {"e3", "a", "d", Rational(1)},
                          {"e4", "b", "c", Rational(1)},
                          {"e5", "b", "d", Rational(1)},
                          {"e6", "c", "d", Rational(1)}});
    CHECK(exact_det(cycle_gram(k4).Z) == 16);
}

TEST_CASE("relevant vectors of simple lattices") {
    RatMatrix one(1, 1);
    one(0, 0) = Rational(7, 3);
    auto r1 = relevant_vectors(GramLattice(one));
    REQUIRE(r1.size() == 2);

    auto r2 = relevant_vectors(GramLattice(rat2(Rational(2), Rational(0), Rational(0), Rational(5))));
    CHECK(r2.size() == 4);  // box cell: the diagonal classes tie

    auto r3 = relevant_vectors(GramLattice(hexagonal()));
    CHECK(r3.size() == 6);
    bool has_mixed = false;
    for (const auto& n : r3)
        if ((n[0] == 1 && n[1] == -1) || (n[0] == -1 && n[1] == 1)) has_mixed = true;
    CHECK(has_mixed);
}

TEST_CASE("relevant vectors match a brute-force coset-minimum oracle") {
    // Independent enumeration: strict +/- minimizers per parity class over
    // the box [-3,3]^2, in plain exact arithmetic.
    auto oracle = [](const RatMatrix& Z) {
        std::set<std::vector<long>> out;
        for (int pa = 0; pa < 2; ++pa)
            for (int pb = 0; pb < 2; ++pb) {
                if (pa == 0 && pb == 0) continue;
                std::vector<std::vector<long>> best;
                Rational best_val(0);
                for (long a = -3; a <= 3; ++a)
                    for (long b = -3; b <= 3; ++b) {
                        if ((((a % 2) + 2) % 2) != pa || (((b % 2) + 2) % 2) != pb) continue;
                        Rational v = Rational(a) * Z(0, 0) * a + 2 * Rational(a) * Z(0, 1) * b +
                                     Rational(b) * Z(1, 1) * b;
                        if (best.empty() || v < best_val) {
                            best = {{a, b}};
                            best_val = v;
                        } else if (v == best_val) {
                            best.push_back({a, b});
                        }
                    }
                if (best.size() == 2)
                    for (auto& n : best) out.insert(n);
            }
        return out;
    };
    for (const RatMatrix& Z :
         {hexagonal(), rat2(Rational(5), Rational(2), Rational(2), Rational(3)),
          rat2(Rational(7, 2), Rational(-1), Rational(-1), Rational(2))}) {
        auto mine = relevant_vectors(GramLattice(Z));
        std::set<std::vector<long>> got(mine.begin(), mine.end());
        CHECK(got == oracle(Z));
    }
}

TEST_CASE("Voronoi cells: interval, square, hexagon") {
    RatMatrix one(1, 1);
    one(0, 0) = Rational(9);  // Vor(lambda Z) = Vor(Z)
    auto cell1 = voronoi_cell(GramLattice(one));
    CHECK(cell1.volume == 1);
    REQUIRE(cell1.vertices.size() == 2);
    CHECK((cell1.vertices[0](0) == Rational(-1, 2) || cell1.vertices[0](0) == Rational(1, 2)));

    auto cell2 = voronoi_cell(GramLattice(rat2(Rational(3), Rational(0), Rational(0), Rational(1))));
    CHECK(cell2.volume == 1);
    CHECK(cell2.vertices.size() == 4);

    auto hex = voronoi_cell(GramLattice(hexagonal()));
    CHECK(hex.volume == 1);
    CHECK(hex.vertices.size() == 6);
    CHECK(hex.relevant.size() == 6);
}

TEST_CASE("moments of simple lattices") {
    RatMatrix one(1, 1);
    one(0, 0) = Rational(13, 4);
    CHECK(moment(GramLattice(one)) == Rational(13, 48));  // L/12

    CHECK(moment(GramLattice(rat2(Rational(3), Rational(0), Rational(0), Rational(7)))) ==
          Rational(10, 12));

    CHECK(moment(GramLattice(hexagonal())) == Rational(5, 18));
}

TEST_CASE("hexagonal moment agrees with a dense grid oracle") {
    auto cell = voronoi_cell(GramLattice(hexagonal()));
    Eigen::MatrixXd Zd(2, 2);
    Zd << 2, 1, 1, 2;
    std::vector<Eigen::VectorXd> normals;
    std::vector<double> rhs;
    for (size_t k = 0; k < cell.halfspace_normal.size(); ++k) {
        Eigen::VectorXd a(2);
        a << to_double(cell.halfspace_normal[k](0)), to_double(cell.halfspace_normal[k](1));
        normals.push_back(a);
        rhs.push_back(to_double(cell.halfspace_rhs[k]));
    }
    double grid = oracles::grid_moment(Zd, normals, rhs, 1.0, 2e-4);
    CHECK(std::abs(grid - 5.0 / 18.0) < 1e-4);
}

TEST_CASE("membership in the cell matches the defining inequalities") {
    GramLattice gram(hexagonal());
    auto cell = voronoi_cell(gram);
    std::mt19937_64 rng(5);
    auto rnd = [&]() { return Rational((long)(rng() % 41) - 20, 1 + (long)(rng() % 12)); };
    for (int trial = 0; trial < 1000; ++trial) {
        RatVector x(2);
        x << rnd() / 8, rnd() / 8;
        bool in_cell = cell.contains(x);
        bool in_def = true;
        for (long n0 = -4; n0 <= 4 && in_def; ++n0)
            for (long n1 = -4; n1 <= 4 && in_def; ++n1) {
                if (n0 == 0 && n1 == 0) continue;
                std::vector<long> n{n0, n1};
                RatVector zn = RatVector::Zero(2);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) zn(i) += gram.Z(i, j) * Rational(n[j]);
                if (zn.dot(x) > detail::quad_form(gram.Z, n) / 2) in_def = false;
            }
        CHECK(in_cell == in_def);
    }
}

TEST_CASE("moment is unimodular invariant and scales linearly") {
    GramLattice gram(hexagonal());
    Rational base = moment(gram);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        RatMatrix U = RatMatrix::Identity(2, 2);
        U(0, 1) = Rational((long)(rng() % 5) - 2);
        RatMatrix Zu = U.transpose() * gram.Z * U;
        CHECK(moment(GramLattice(Zu)) == base);
    }
    CHECK(moment(GramLattice(RatMatrix(Rational(7, 3) * gram.Z))) == Rational(7, 3) * base);
}

TEST_CASE("moment_over on boxes and product domains") {
    RatMatrix Z(3, 3);
    Z << Rational(2), Rational(1), Rational(0), Rational(1), Rational(3), Rational(1, 2),
        Rational(0), Rational(1, 2), Rational(5);
    CHECK(moment_over(MomentDomain::unit_box(3), Z) == Rational(10, 12));  // trace/12

    // Block identity: with A = diag(A0, 0) and V = Vor(A0) x Vor(Z22), I_V(A) = I(A0).
    RatMatrix A0(1, 1);
    A0(0, 0) = Rational(2);
    RatMatrix Z22 = hexagonal();
    MomentDomain V = MomentDomain::cell(voronoi_cell(GramLattice(A0)));
    V.append(MomentDomain::cell(voronoi_cell(GramLattice(Z22))));
    RatMatrix A = RatMatrix::Zero(3, 3);
    A(0, 0) = Rational(2);
    CHECK(moment_over(V, A) == moment(GramLattice(A0)));

    // Second identity: I_V(Z) = I_{Vor(A0)}(Z11) + I(Z22) for block Z.
    RatMatrix Zblk = RatMatrix::Zero(3, 3);
    Zblk(0, 0) = Rational(7);
    Zblk.block(1, 1, 2, 2) = Z22;
    MomentDomain V0 = MomentDomain::cell(voronoi_cell(GramLattice(A0)));
    RatMatrix Z11(1, 1);
    Z11(0, 0) = Rational(7);
    CHECK(moment_over(V, Zblk) == moment_over(V0, Z11) + moment(GramLattice(Z22)));
}

TEST_CASE("jacobian moments and the universal identity shape") {
    auto circle = make_graph({{"w", 1}}, {{"l", "w", "w", Rational(4)}});
    CHECK(jac_moment(circle) == Rational(4, 12));

    auto seg = make_graph({{"a", 1}, {"b", 1}}, {{"e", "a", "b", Rational(6)}});
    CHECK(jac_moment(seg) == 0);

    auto theta = make_graph({{"u", 0}, {"v", 0}}, {{"e1", "u", "v", Rational(1)},
                                                   {"e2", "u", "v", Rational(1)},
                                                   {"e3", "u", "v", Rational(1)}});
    CHECK(jac_moment(theta) == Rational(5, 18));
}

TEST_CASE("float-guided vertex enumeration matches the exhaustive exact one") {
    std::mt19937_64 rng(31);
    auto rnd = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
    };
    for (int trial = 0; trial < 12; ++trial) {
        const int b = 2 + static_cast<int>(rnd(0, 1));
        RatMatrix Z(b, b);
        while (true) {
            for (int i = 0; i < b; ++i)
                for (int j = 0; j <= i; ++j) {
                    Z(i, j) = Rational(rnd(-3, 3), rnd(1, 4));
                    Z(j, i) = Z(i, j);
                }
            for (int i = 0; i < b; ++i) Z(i, i) = Rational(rnd(3, 9), rnd(1, 2));
            if (is_positive_definite(Z)) break;
        }
        auto cands = detail::coset_minimizers(Z, 3);
        detail::HalfspaceSystem hs;
        for (const auto& n : cands) {
            RatVector a = RatVector::Zero(b);
            for (int i = 0; i < b; ++i)
                for (int j = 0; j < b; ++j) a(i) += Z(i, j) * Rational(n[j]);
            hs.normal.push_back(std::move(a));
            hs.rhs.push_back(detail::quad_form(Z, n) / 2);
        }
        auto guided = detail::enumerate_vertices_guided(hs, b);
        auto exact = detail::enumerate_vertices_exact(hs, b);
        REQUIRE(guided.size() == exact.size());
        for (size_t k = 0; k < exact.size(); ++k) CHECK(guided[k] == exact[k]);
    }
}

TEST_CASE("dimension guard") {
    RatMatrix big = RatMatrix::Identity(7, 7);
    CHECK_THROWS_AS(voronoi_cell(GramLattice(big)), validation_error);
}
