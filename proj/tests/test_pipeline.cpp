#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rlas/pipeline/checkpoint.hpp"
#include "rlas/pipeline/experiments.hpp"
#include "rlas/pipeline/synthetic.hpp"
#include "support.hpp"

using namespace rlas;
using namespace rlas::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("rlas-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

EmbeddingStore tiny_store() {
    Eigen::MatrixXd v(2, 3);
    v << 1, 2, 3, -1, -2, -3;
    return EmbeddingStore({"paris", "france"}, v, "test");
}

} // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("  Hello\tWORLD  again ") == std::vector<std::string>{"hello", "world", "again"});
    CHECK(tokenize("").empty());
}

TEST_CASE("load_dataset") {
    SUBCASE("fixture statistics") {
        const auto ds = load_dataset(RLAS_FIXTURE_DIR "/small.tsv");
        CHECK(ds.records.size() == 6);
        CHECK(ds.stats.positives == 2);
        CHECK(ds.stats.questions == 2);
        CHECK(ds.stats.positive_fraction() == doctest::Approx(1.0 / 3.0));
        CHECK(ds.groups[1].question_id == "q2");
        CHECK(ds.groups[1].rows == std::vector<std::size_t>{3, 4, 5});
        CHECK(ds.records[0].question.front() == "what");
        CHECK(ds.records[5].line == 6);
    }

    SUBCASE("statistics equal a recount") {
        SyntheticOptions opts;
        opts.questions = 30;
        opts.candidates = 7;
        opts.positives = 2;
        const auto ds = synthetic_dataset(opts, 3, "dev");
        std::size_t pos = 0;
        for (const auto& r : ds.records) pos += r.label;
        CHECK(ds.stats.pairs == 210);
        CHECK(ds.stats.positives == pos);
        CHECK(pos == 60);
        CHECK(ds.stats.questions == 30);
    }

    SUBCASE("label outside {0, 1} names the line") {
        std::istringstream in("q\ta b\tc d\t1\nq\ta b\tc d\t2\n");
        try {
            parse_dataset(in, "bad.tsv");
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("bad.tsv:2") != std::string::npos);
        }
    }

    SUBCASE("malformed and empty input") {
        std::istringstream fields("q\tonly three\tfields\n");
        CHECK_THROWS_AS(parse_dataset(fields), FormatError);
        std::istringstream empty("");
        CHECK_THROWS_AS(parse_dataset(empty), InputError);
        std::istringstream blank_tokens("q\t   \tanswer\t0\n");
        CHECK_THROWS_AS(parse_dataset(blank_tokens), InputError);
        CHECK_THROWS_AS(load_dataset("/nonexistent/data.tsv"), InputError);
    }

    SUBCASE("duplicate rows stay distinct and round trip") {
        std::istringstream in("q\ta\tb\t1\nq\ta\tb\t1\n\n");
        const auto ds = parse_dataset(in);
        CHECK(ds.records.size() == 2);
        std::ostringstream out;
        write_dataset(out, ds);
        std::istringstream again(out.str());
        CHECK(parse_dataset(again).records.size() == 2);
    }
}

TEST_CASE("embeddings") {
    SUBCASE("lookup and OOV") {
        const auto store = tiny_store();
        CHECK(store.lookup("france") == Eigen::Vector3d(-1, -2, -3));
        CHECK(store.lookup("berlin") == Eigen::Vector3d::Zero());
        CHECK(!store.contains("berlin"));
    }

    SUBCASE("100 vectors of dim 60") {
        Rng rng(1);
        std::ostringstream text;
        text << "100 60\n";
        for (int i = 0; i < 100; ++i) {
            text << "tok" << i;
            for (int j = 0; j < 60; ++j) text << ' ' << rng.uniform(-1, 1);
            text << '\n';
        }
        std::istringstream in(text.str());
        const auto store = parse_embeddings(in);
        CHECK(store.vocabulary_size() == 100);
        CHECK(store.dim() == 60);
    }

    SUBCASE("write then parse is exact") {
        Rng rng(2);
        Eigen::MatrixXd v(3, 4);
        for (auto& x : v.reshaped()) x = rng.normal();
        const EmbeddingStore store({"a", "b", "c"}, v);
        std::ostringstream out;
        write_embeddings(out, store);
        std::istringstream in(out.str());
        const auto back = parse_embeddings(in);
        for (const auto& t : {"a", "b", "c"}) CHECK(back.lookup(t) == store.lookup(t));
    }

    SUBCASE("header and row mismatches") {
        std::istringstream short_row("1 3\nx 1 2\n");
        CHECK_THROWS_AS(parse_embeddings(short_row), FormatError);
        std::istringstream missing_row("2 2\nx 1 2\n");
        CHECK_THROWS_AS(parse_embeddings(missing_row), FormatError);
        std::istringstream dup("2 1\nx 1\nx 2\n");
        CHECK_THROWS_AS(parse_embeddings(dup), FormatError);
    }
}

TEST_CASE("embed_pair") {
    const auto store = tiny_store();
    QARecord r{"q", {"paris", "is", "france"}, {}, 1, 1};
    for (int i = 0; i < 100; ++i) r.answer.push_back(i % 2 ? "paris" : "unknown");
    const auto pair = embed_pair(r, store, 80);
    CHECK(pair.question.cols() == 3);
    CHECK(pair.question.rows() == 3);
    CHECK(pair.question.col(1).isZero(0.0));
    CHECK(pair.question.col(2) == Eigen::Vector3d(-1, -2, -3));
    CHECK(pair.answer.cols() == 80);

    const QARecord oov{"q", {"zzz", "yyy"}, {"www"}, 0, 2};
    const auto z = embed_pair(oov, store, 80);
    CHECK(z.question.isZero(0.0));
    CHECK(z.answer.cols() == 1);

    CHECK_THROWS_AS(embed_tokens({}, store, 80), InputError);
}

TEST_CASE("config") {
    RunConfig cfg;
    cfg.seed = 9;
    cfg.model.hidden = 5;
    cfg.pretrain.mode = abc::Mode::Standard;
    cfg.train.lambda = 0.3;
    const auto back = config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(hash_hex(config_hash(cfg)).size() == 16);

    RunConfig other = cfg;
    other.train.lambda = 0.4;
    CHECK(config_hash(other) != config_hash(cfg));

    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"sede", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"train", {{"lambda", 3.0}}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"pretrain", {{"mode", "fast"}}}}), ConfigError);
    CHECK(config_from_json(nlohmann::json::object()).model.embedding_dim == 60);
}

TEST_CASE("checkpoint") {
    const auto dir = scratch_dir("checkpoint");
    RunConfig cfg;
    cfg.model = test::small_dims(3, 2, 2, 1);
    cfg.model.dense_hidden = {8};
    const abc::ParameterLayout layout(cfg.model);
    Rng rng(3);
    const auto w = abc::random_weights(layout, -1, 1, rng);
    const auto path = (dir / "w.ckpt").string();
    save_checkpoint(path, w, cfg);

    SUBCASE("bit-exact round trip") {
        const auto ck = load_checkpoint(path, cfg.model);
        CHECK(ck.weights == w);
        CHECK(ck.hash == config_hash(cfg));
        CHECK(to_json(ck.config) == to_json(cfg));
    }

    SUBCASE("file size is header plus eight bytes per weight") {
        CHECK(layout.size() == 338);
        CHECK(fs::file_size(path) == checkpoint_header_size(cfg) + 8 * 338);
    }

    SUBCASE("other model dims are incompatible") {
        auto dims = cfg.model;
        dims.hidden = 3;
        CHECK_THROWS_AS(load_checkpoint(path, dims), IncompatibleError);
    }

    SUBCASE("tampered config is incompatible") {
        auto bytes = read_bytes(path);
        const auto at = bytes.find("\"lambda\":0.5");
        REQUIRE(at != std::string::npos);
        bytes[at + 11] = '6';
        std::ofstream(dir / "t.ckpt", std::ios::binary) << bytes;
        CHECK_THROWS_AS(load_checkpoint((dir / "t.ckpt").string()), IncompatibleError);
    }

    SUBCASE("truncated or foreign files") {
        const auto bytes = read_bytes(path);
        std::ofstream(dir / "short.ckpt", std::ios::binary) << bytes.substr(0, bytes.size() - 3);
        CHECK_THROWS_AS(load_checkpoint((dir / "short.ckpt").string()), FormatError);
        std::ofstream(dir / "junk.ckpt", std::ios::binary) << "not a checkpoint at all";
        CHECK_THROWS_AS(load_checkpoint((dir / "junk.ckpt").string()), FormatError);
    }

    SUBCASE("weights of the wrong length are rejected") {
        CHECK_THROWS_AS(save_checkpoint((dir / "x.ckpt").string(), abc::WeightVector::Zero(5), cfg), ShapeError);
    }
}

TEST_CASE("synthetic task") {
    SyntheticOptions opts;
    opts.questions = 20;
    const auto a = make_synthetic_task(opts);
    const auto b = make_synthetic_task(opts);
    CHECK(a.dataset.records.size() == 200);
    CHECK(a.dataset.stats.positives == 20);
    CHECK(a.embeddings.dim() == 8);
    std::ostringstream sa, sb;
    write_dataset(sa, a.dataset);
    write_dataset(sb, b.dataset);
    CHECK(sa.str() == sb.str());
    for (const auto& r : a.dataset.records)
        for (const auto& t : r.answer) CHECK(a.embeddings.contains(t));
}

TEST_CASE("experiments") {
    SyntheticOptions opts;
    opts.questions = 12;
    opts.candidates = 4;
    opts.embedding_dim = 3;
    const auto task = make_synthetic_task(opts);
    RunConfig cfg;
    cfg.model = test::small_dims(3, 2, 2, 1);
    cfg.pretrain.population = 6;
    cfg.pretrain.max_evaluations = 30;
    cfg.pretrain.fitness_subsample = 16;
    cfg.train.episodes = 2;
    cfg.train.batch_size = 4;
    const auto data = prepare(task.dataset, task.embeddings, cfg.model);

    SUBCASE("embedding width must match the model") {
        auto dims = cfg.model;
        dims.embedding_dim = 4;
        CHECK_THROWS_AS(prepare(task.dataset, task.embeddings, dims), IncompatibleError);
    }

    SUBCASE("pretrain respects its budget") {
        const auto res = pretrain(data, cfg);
        CHECK(res.evaluations == 30);
        CHECK(res.weights.size() == abc::ParameterLayout(cfg.model).size());
        CHECK((res.weights.array().abs() <= 1.0).all());
    }

    SUBCASE("evaluation report") {
        const auto rep = evaluate(data, test::random_params(cfg.model, 4));
        CHECK(rep.questions == 12);
        CHECK(rep.pairs == 48);
        CHECK(rep.map > 0.0);
        CHECK(rep.map <= 1.0);
        CHECK(rep.mrr > 0.0);
        CHECK(rep.mrr <= 1.0);
        std::ostringstream out;
        write_report_csv(out, "synthetic", "train", rep, "abc");
        CHECK(out.str().rfind("dataset,split,MAP,MRR,n_questions,n_pairs,config_hash\nsynthetic,train,", 0) == 0);
    }

    SUBCASE("grids") {
        CHECK(lambda_grid().size() == 10);
        CHECK(lambda_grid().front() == 0.1);
        CHECK(lambda_grid().back() == 1.0);
        CHECK(factor_grid().front() == 0.5);
        CHECK(factor_grid().back() == 5.0);
    }

    SUBCASE("sweeps emit one row per grid value") {
        const abc::ParameterLayout layout(cfg.model);
        Rng rng(5);
        const auto rows = sweep_lambda(data, data, abc::random_weights(layout, -1, 1, rng), cfg);
        CHECK(rows.size() == 10);
        std::ostringstream out;
        write_lambda_csv(out, rows, "h");
        const std::string text = out.str();
        CHECK(std::count(text.begin(), text.end(), '\n') == 11);
    }

    SUBCASE("bench rows pair the modes by seed") {
        BenchConfig b;
        b.seeds = 2;
        b.dimension = 3;
        b.population = 10;
        b.max_evaluations = 200;
        const auto rows = bench_abc(b);
        CHECK(rows.size() == 8);
        for (const auto& r : rows) CHECK(r.evaluations == 200);
        CHECK(rows[0].mode == "standard");
        CHECK(rows[1].mode == "mutual");
        CHECK(rows[0].seed == rows[1].seed);
    }
}

TEST_CASE("format_number round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 0.0}) CHECK(std::stod(format_number(v)) == v);
}
