#include <gtest/gtest.h>

#include <sstream>

#include "pwband/errors.hpp"
#include "pwband/records.hpp"

using namespace pwband;

TEST(Records, EllipsoidRoundTrip) {
    Eigen::MatrixXd p(2, 2);
    p << 2.0, 0.3, 0.3, 1.0 / 3.0;
    Eigen::VectorXd c(2);
    c << 0.1, -1e-17;
    const Ellipsoid e = Ellipsoid::from_shape(c, p);
    const Ellipsoid back = ellipsoid_from_json(ellipsoid_to_json(e));
    EXPECT_EQ(back.center(), e.center());
    EXPECT_EQ(back.shape(), e.shape());
    EXPECT_FALSE(back.degenerate());
    const Ellipsoid pt = ellipsoid_from_json(ellipsoid_to_json(Ellipsoid::point(c)));
    EXPECT_TRUE(pt.degenerate());
    EXPECT_THROW((void)ellipsoid_from_json("{\"center\": 1}"), InputError);
}

TEST(Records, ConfigRoundTrip) {
    ExperimentConfig c = config_from_json(R"({"n": 77, "alpha": 0.02, "beta": 0.03})", "coverage");
    EXPECT_EQ(c.n, 77);
    EXPECT_DOUBLE_EQ(c.gamma, 0.05);
    const ExperimentConfig back = config_from_json(config_to_json(c), "coverage");
    EXPECT_EQ(back.n, 77);
    EXPECT_EQ(back.alpha, c.alpha);
    EXPECT_EQ(back.grid.points, c.grid.points);
    EXPECT_THROW((void)config_from_json(R"({"bogus": 1})", "coverage"), InputError);
    EXPECT_THROW((void)config_from_json(R"({"n": "many"})", "coverage"), InputError);
    EXPECT_THROW((void)config_from_json("not json", "coverage"), InputError);
}

TEST(Records, ErrorRecord) {
    const std::string r = error_record("conditioning", "gram too ill-conditioned", 3e13);
    EXPECT_NE(r.find("\"status\":\"error\""), std::string::npos);
    EXPECT_NE(r.find("\"kind\":\"conditioning\""), std::string::npos);
    EXPECT_NE(r.find("condition"), std::string::npos);
}

TEST(Records, BandCsv) {
    std::vector<IntervalEstimate> band(2);
    band[0].query = Eigen::VectorXd::Constant(1, 0.5);
    band[0].status = IntervalStatus::ok;
    band[0].lo = -1.0;
    band[0].hi = 2.0;
    band[1].query = Eigen::VectorXd::Constant(1, 1.0);
    band[1].status = IntervalStatus::empty;
    std::ostringstream os;
    write_band_csv(os, band);
    EXPECT_EQ(os.str(), "x,lo,hi,empty_flag\n0.5,-1,2,0\n1,,,1\n");
}

TEST(Records, FullPrecision) {
    EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
