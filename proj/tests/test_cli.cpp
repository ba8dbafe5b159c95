#include "commands.hpp"

#include <gtest/gtest.h>

using namespace wcs;
using namespace wcs::cli;

TEST(Parse, WordWithExponents) {
    FactorWord w = parseWord(" K[1,0]K[0,1]^-2 K[1,1]^(1/2) ");
    ASSERT_EQ(w.factors.size(), 3u);
    EXPECT_EQ(w.factors[0].charge, (Charge{1, 0}));
    EXPECT_EQ(w.factors[1].exponent, Q(-2));
    EXPECT_EQ(w.factors[2].exponent, Q(1, 2));
    EXPECT_TRUE(parseWord("").factors.empty());
    EXPECT_THROW(parseWord("K[1,0] L[0,1]"), AlgebraError);
}

TEST(Parse, ChargesPointsWindows) {
    EXPECT_EQ(parseCharge("2,-1"), (Charge{2, -1}));
    EXPECT_THROW(parseCharge("2,x"), AlgebraError);
    EXPECT_EQ(parsePoint("0.5,-1"), cplx(0.5, -1));
    Window w = parseWindow("-1,1,-2,2,8,9");
    EXPECT_EQ(w.nx, 8);
    EXPECT_EQ(w.ny, 9);
    EXPECT_THROW(parseWindow("1,2,3"), AlgebraError);
}

TEST(Config, RejectsBadValues) {
    RunConfig c;
    c.validate();
    c.lambda = -1;
    EXPECT_THROW(c.validate(), AlgebraError);
    c = RunConfig{};
    c.model = "su4";
    EXPECT_THROW(c.validate(), AlgebraError);
}

TEST(Commands, FactorizePentagon) {
    RunConfig c;
    Json j = cmdFactorize(c, "K[1,0] K[0,1]", 1, "auto");
    ASSERT_EQ(j["spectrum"].size(), 3u);
    for (const auto& r : j["spectrum"]) EXPECT_EQ(r["coeff"], "1/1");
    EXPECT_EQ(j["word"]["order"], "increasing");
}

TEST(Commands, DegeneratePairingHasItsOwnExitCode) {
    RunConfig c;
    try {
        cmdFactorize(c, "K[1,0]", 0, "auto");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.exitCode(), 2);
    }
}

TEST(Commands, PeriodsOnTheDiscriminantFail) {
    RunConfig c;
    try {
        cmdPeriods(c, cplx(1, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.exitCode(), 3);
    }
}

TEST(Render, CsvTables) {
    RunConfig c;
    c.format = "csv";
    std::string s = render(c, "factorize", cmdFactorize(c, "K[1,0] K[0,1]", 1, "auto"));
    EXPECT_EQ(s.substr(0, s.find('\n')), "m,n,charge,coeff,achievedError");
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
    EXPECT_NE(s.find("1,1,1 1,1/1,0"), std::string::npos);
    std::string t = render(c, "tree", cmdTree(c, Charge{2, 0}, regionPoint(c.swModel(), "weak")));
    EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 4);
    EXPECT_THROW(render(c, "nothing", Json::object()), AlgebraError);
}
