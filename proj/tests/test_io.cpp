#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hyperslice/errors.hpp"
#include "hyperslice/expectation.hpp"
#include "hyperslice/io.hpp"
#include "oracles.hpp"

using namespace hyperslice;

TEST(OrientationFile, ParsesCommentsAndBlankLines)
{
    std::istringstream in("# two directions\n\n1 0 0\n  0 0.6 0.8\n");
    const FlatOrientation o = parse_orientation(in);
    EXPECT_EQ(3u, o.n());
    EXPECT_EQ(2u, o.k());
    EXPECT_EQ((Vector{0, 0.6, 0.8}), o.spans()[1]);
}

TEST(OrientationFile, RoundTripIsExact)
{
    std::mt19937_64 gen(401);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const std::size_t k = 1 + trial % n;
        VectorList v;
        for (std::size_t j = 0; j < k; ++j) v.push_back(oracle::unit_vector(gen, n));
        const FlatOrientation o(v);
        std::stringstream buf;
        write_orientation(buf, o);
        const FlatOrientation back = parse_orientation(buf);
        EXPECT_EQ(o.spans(), back.spans());
        EXPECT_EQ(expected_vertices_exact(Body::cube(n), o), expected_vertices_exact(Body::cube(n), back));
    }
}

TEST(OrientationFile, Malformed)
{
    std::istringstream empty("# nothing\n");
    EXPECT_THROW(parse_orientation(empty), InvalidInput);
    std::istringstream word("1 0 x\n");
    EXPECT_THROW(parse_orientation(word), InvalidInput);
    std::istringstream ragged("1 0 0\n0 1\n");
    EXPECT_THROW(parse_orientation(ragged), InvalidInput);
    std::istringstream parallel("1 0\n2 0\n");
    EXPECT_THROW(parse_orientation(parallel), DegenerateGeometry);
    EXPECT_THROW(read_orientation_file("/nonexistent/orientation.txt"), InvalidInput);
}

TEST(BodyFile, ParsesAndRoundTrips)
{
    std::istringstream in("2\n2 0\n1 1\n-1 -0.5\n");
    const Body b = parse_body(in);
    EXPECT_EQ(2u, b.n());
    EXPECT_EQ((Vector{1, 1}), b.edge_generators()[1]);
    EXPECT_EQ((Vector{-1, -0.5}), b.base());
    std::stringstream buf;
    write_body(buf, b);
    const Body back = parse_body(buf);
    EXPECT_EQ(b.edge_generators(), back.edge_generators());
    EXPECT_EQ(b.base(), back.base());
}

TEST(BodyFile, Malformed)
{
    std::istringstream missing_rows("3\n1 0 0\n0 1 0\n");
    EXPECT_THROW(parse_body(missing_rows), InvalidInput);
    std::istringstream bad_n("two\n");
    EXPECT_THROW(parse_body(bad_n), InvalidInput);
    std::istringstream zero_n("0\n");
    EXPECT_THROW(parse_body(zero_n), InvalidInput);
    std::istringstream short_row("2\n1 0\n0\n0 0\n");
    EXPECT_THROW(parse_body(short_row), InvalidInput);
    std::istringstream singular("2\n1 1\n2 2\n0 0\n");
    EXPECT_THROW(parse_body(singular), InvalidInput);
}
