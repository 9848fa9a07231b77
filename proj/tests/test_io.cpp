#include <gtest/gtest.h>

#include "ergorate/io.hpp"
#include "support.hpp"

using namespace ergorate;
using support::model_path;

TEST(ModelJson, RoundTrip)
{
    const RandomWalkModel m = support::two_neighbour(0.1, 0.3);
    const RandomWalkModel back = model_from_json(json::parse(to_json(m).dump()));
    EXPECT_EQ(back.law.g, m.law.g);
    EXPECT_EQ(back.law.d, m.law.d);
    EXPECT_EQ(back.law.a, m.law.a);
    EXPECT_EQ(back.boundary.c, m.boundary.c);
    EXPECT_EQ(back.boundary.rows, m.boundary.rows);
}

TEST(ModelJson, ShippedFilesLoad)
{
    for (const char* name : {"two_neighbour_ab_1_2.json", "two_neighbour_ab_1_10.json",
                             "two_neighbour_ab_1_50.json", "general_g2_d2.json"})
        EXPECT_TRUE(validate(model_from_json(read_json_file(model_path(name)))).empty()) << name;
    const RandomWalkModel bd = model_from_json(read_json_file(model_path("birth_death_r0.json")));
    EXPECT_EQ(bd.g(), 1);
    EXPECT_DOUBLE_EQ(bd.law.at(-1), 0.7);
    EXPECT_FALSE(check_neri(model_from_json(read_json_file(model_path("non_neri.json"))).law));
    EXPECT_NO_THROW(speksma_from_json(read_json_file(model_path("speksma_geometric.json"))).check());
    EXPECT_NO_THROW(rosen_from_json(read_json_file(model_path("rosenthal.json"))).check());
}

TEST(ModelJson, SchemaErrors)
{
    auto code_of = [](const std::string& text) {
        try {
            model_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::NonConvergence;
    };
    EXPECT_EQ(code_of(R"({"g":1,"d":1,"a":[0.5,0.5,0.0]})"), ErrorCode::InvalidModel);
    EXPECT_EQ(code_of(R"({"g":"x","d":1,"a":[0.5,0.5,0.0],"boundary":[[1,0]],"c":1})"),
              ErrorCode::InvalidModel);
    EXPECT_EQ(code_of(R"([1,2])"), ErrorCode::InvalidModel);
    EXPECT_EQ(code_of(R"({"family":"rosen","pi0":0.5})"), ErrorCode::InvalidModel);
    EXPECT_THROW(read_json_file(model_path("does_not_exist.json")), Error);
}

TEST(ReportJson, RoundTripFieldForField)
{
    const RateReport r = rate(support::two_neighbour(0.1, 0.1));
    const json j = to_json(r);
    const RateReport back = report_from_json(json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(back.rho_hat, r.rho_hat);
    EXPECT_EQ(back.delta_hat, r.delta_hat);
    ASSERT_EQ(back.candidates.size(), r.candidates.size());
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        EXPECT_EQ(back.candidates[i].lambda, r.candidates[i].lambda);
        EXPECT_EQ(back.candidates[i].pattern, r.candidates[i].pattern);
        EXPECT_EQ(back.candidates[i].kernel_vector, r.candidates[i].kernel_vector);
    }
    EXPECT_EQ(back.notes, r.notes);
}

TEST(ReportJson, RequiredKeys)
{
    const json j = to_json(rate(support::two_neighbour(0.02, 0.02)));
    for (const char* key : {"delta_hat", "eta", "candidates", "rho_hat", "method"})
        EXPECT_TRUE(j.contains(key)) << key;
    const json& c = j.at("candidates").at(0);
    EXPECT_EQ(c.at("lambda").size(), 2u);
    EXPECT_TRUE(c.contains("pattern"));
    EXPECT_TRUE(c.at("residuals").contains("boundary"));
    EXPECT_TRUE(c.at("residuals").contains("recurrence"));
}
