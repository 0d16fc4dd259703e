#include "qdecim/io.hpp"
#include "qdecim/random.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace qdecim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qdecim_io_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(FormatDouble, SeventeenSignificantDigits) {
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(1.0), "1");
    EXPECT_EQ(io::format_double(-1.0 / 3.0), "-0.33333333333333331");
    EXPECT_EQ(io::format_double(2.5e-300), "2.5e-300");
}

TEST(StateSetFile, RoundTripIsBitExact) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ComplexMatrix c = random_state_matrix(9, 3, seed);
        const io::StateSetData back = io::parse_state_set(io::state_set_json(c, {"a", "b", "c\"q"}));
        EXPECT_TRUE(back.matrix == c);
        EXPECT_EQ(back.labels, (std::vector<std::string>{"a", "b", "c\"q"}));
    }
}

TEST(StateSetFile, RejectsMalformed) {
    const char* cases[] = {
        "",
        "{",
        "{\"states\": [[[1, 0]]]}",
        "{\"dimension\": 2, \"states\": [[[1, 0]]]}",
        "{\"dimension\": 2, \"states\": [[[1, 0], [0]]]}",
        "{\"dimension\": 2, \"states\": [[[1, 0], [0, \"x\"]]]}",
        "{\"dimension\": -2, \"states\": []}",
        "{\"dimension\": 2, \"states\": [[[1, 0], [0, 0]]], \"labels\": [1]}",
        "[1, 2]",
    };
    for (const char* text : cases) {
        try {
            io::parse_state_set(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument) << text;
        }
    }
}

TEST(ModelFile, RoundTripIsBitExact) {
    const PcaModel m = fit_pca(validate_state_set(random_state_matrix(24, 5, 3)));
    const std::string text = io::model_json(m);
    const PcaModel back = io::parse_model(text);
    EXPECT_TRUE(back.basis() == m.basis());
    EXPECT_TRUE(back.weights() == m.weights());
    EXPECT_TRUE(back.singular_values() == m.singular_values());
    EXPECT_EQ(io::model_json(back), text);
}

TEST(ModelFile, RejectsInconsistentModels) {
    const PcaModel m = fit_pca(validate_state_set(random_state_matrix(12, 2, 3)));
    std::string text = io::model_json(m);
    const auto pos = text.find("\"format_version\": 1");
    std::string wrong_version = text;
    wrong_version.replace(pos, 19, "\"format_version\": 2");
    EXPECT_THROW(io::parse_model(wrong_version), Error);

    ComplexMatrix basis = m.basis();
    basis.col(1) *= 2.0;
    const std::string broken = io::model_json(PcaModel::from_parts(m.basis(), m.singular_values(), m.weights()));
    EXPECT_NO_THROW(io::parse_model(broken));
    try {
        PcaModel::from_parts(basis, m.singular_values(), m.weights());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidModel);
    }
}

TEST(Curve, CsvRoundTrip) {
    const std::vector<io::CurveRow> rows = {{1, 0.0}, {2, 0.25}, {3, 1.0 / 3.0}};
    const std::string csv = io::curve_csv(rows);
    EXPECT_EQ(csv.substr(0, 8), "d,value\n");
    const auto back = io::parse_curve(csv);
    ASSERT_EQ(back.size(), 3u);
    EXPECT_EQ(back[2].value, 1.0 / 3.0);
    EXPECT_THROW(io::parse_curve("d,value\n2,0\n1,0\n"), Error);
    EXPECT_THROW(io::parse_curve("x,y\n"), Error);
}

TEST(Files, AtomicWriteAndMissingFile) {
    const fs::path p = scratch("states.json");
    const ComplexMatrix c = random_state_matrix(6, 2, 1);
    io::write_state_set_file(p, c);
    EXPECT_FALSE(fs::exists(fs::path(p.string() + ".tmp")));
    const StateSet s = io::load_state_set(p);
    EXPECT_TRUE(s.matrix() == c);
    EXPECT_THROW(io::read_text(scratch("does_not_exist.json")), io::IoError);
    EXPECT_THROW(io::write_text_atomic(scratch("no_such_dir") / "x.json", "{}"), io::IoError);
}
