#include <clocale>
#include <sstream>

#include <gtest/gtest.h>

#include <cotsum/report.hpp>

using namespace cotsum;

TEST(FormatNumber, RoundTripsAndIgnoresLocale) {
    std::setlocale(LC_ALL, "de_DE.UTF-8");
    for (double x : {0.1, -1234567.891, 1e-300, 0.19245008972987523, 3.0}) {
        const std::string s = format_number(x);
        EXPECT_EQ(s.find(','), std::string::npos) << s;
        EXPECT_EQ(std::stod(s), x);
    }
    std::setlocale(LC_ALL, "C");
    EXPECT_EQ(format_number(3.0), "3");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(FigureCsv, HeaderAndRows) {
    std::ostringstream os;
    write_figure_csv(os, {{1, 0.5, 0.0}, {3, -0.25, 1.0}});
    EXPECT_EQ(os.str(), "r,c0\n1,0.5\n3,-0.25\n");
}

TEST(AsymptCsv, BelowThresholdRowsLeaveFieldsEmpty) {
    std::ostringstream os;
    AsymptRow flagged;
    flagged.b = 5;
    flagged.below_threshold = true;
    flagged.exact = 1.5;
    AsymptRow row{100, false, 2.0, 1.0, 0.5, 50.0};
    write_asympt_csv(os, {flagged, row});
    EXPECT_EQ(os.str(), "b,exact,main,residual,scaled_residual\n5,1.5,,,\n100,2,1,0.5,50\n");
}

TEST(ScanReportJson, RoundTrip) {
    const auto rep = scan(ScanWindow(1009, 0.6, 0.8), 2);
    const auto j = to_json(rep);
    for (const char* key : {"b", "a0", "a1", "phi", "count", "moments_c0", "moments_q", "ks_distance", "wall_ms"})
        EXPECT_TRUE(j.contains(key)) << key;
    const auto back = scan_report_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_TRUE(same_serialized_fields(rep, back));

    ScanReport with_ks = rep;
    with_ks.ks_distance = 0.0123456789012345678;
    EXPECT_TRUE(same_serialized_fields(with_ks, scan_report_from_json(nlohmann::json::parse(to_json(with_ks).dump()))));
}
