#include "doctest.h"

#include "rmlm/io.hpp"
#include "rmlm/pipeline.hpp"
#include "rmlm/validate.hpp"

#include <filesystem>
#include <random>
#include <sstream>

using namespace rmlm;

TEST_CASE("names") {
    CHECK(default_names(3) == NameTable{"1", "2", "3"});
    CHECK(lookup_name({"a", "b"}, "b") == 1);
    CHECK_THROWS_AS(lookup_name({"a", "b"}, "c"), std::invalid_argument);
}

TEST_CASE("matrix, model and DAG documents round trip") {
    std::mt19937_64 rng(71);
    const auto model = RmlmModel::from_spec(random_well_ordered_spec(4, rng), 17);
    const NameTable names{"Food", "Steel", "Oil", "Cars"};

    NameTable back;
    const auto a = matrix_from_json(matrix_to_json(model.coefficients(), names), &back);
    CHECK(a.A == model.A());
    CHECK(back == names);

    const auto m = model_from_json(Json::parse(model_to_json(model, names).dump()));
    CHECK(m.A() == model.A());
    CHECK(m.seed() == 17);

    const Dag g = minimum_dag(model.coefficients());
    CHECK(dag_from_json(dag_to_json(g, names)) == g);
    const auto dot = dag_to_dot(Dag(2, {{1, 0}}), {"x", "y"});
    CHECK(dot.find("\"y\" -> \"x\"") != std::string::npos);
    CHECK_THROWS(dag_from_json(Json{{"d", 2}, {"edges", {{1, 3}}}}));
}

TEST_CASE("order documents round trip and are validated") {
    OrderResult r;
    r.order = {1, 0, 2};
    r.steps = {{2}, {0}, {1}};
    r.params.a = 1.3;
    r.params.epsilon = 0.1;
    const auto names = default_names(3);
    const auto back = order_from_json(order_to_json(r, names), names);
    CHECK(back.order == r.order);
    CHECK(back.steps == r.steps);
    Json bad = order_to_json(r, names);
    bad["order"] = {"1", "1", "3"};
    CHECK_THROWS(order_from_json(bad, names));
}

TEST_CASE("CSV reading") {
    std::istringstream ok("Date, A ,\"B\"\n2000-01,1.5,-2\n2000-02,0,3e-1\n");
    const auto t = read_csv(ok, true);
    CHECK(t.names == NameTable{"A", "B"});
    CHECK(t.values == Matrix{{1.5, -2.0}, {0.0, 0.3}});

    std::istringstream plain("x,y\n1,2\n");
    CHECK(read_csv(plain).values == Matrix{{1.0, 2.0}});

    std::istringstream ragged("x,y\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), std::runtime_error);
    std::istringstream word("x,y\n1,abc\n");
    CHECK_THROWS_AS(read_csv(word), std::runtime_error);
    std::istringstream narrow("x\n1\n");
    CHECK_THROWS_AS(read_csv(narrow), std::runtime_error);
    CHECK_THROWS(read_csv(std::filesystem::path("/nonexistent/file.csv")));
}

TEST_CASE("CSV writing round trips exactly") {
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    Matrix x(20, 3);
    for (double& v : x.data()) {
        v = u(rng);
    }
    std::stringstream s;
    write_csv(s, {"a", "b", "c"}, x);
    CHECK(read_csv(s).values == x);
    CHECK(format_real(0.025) == "0.025");
}

TEST_CASE("loss orientation clamps gains to zero") {
    CHECK(negate_clamp(Matrix{{0.5, -1.2}}) == Matrix{{0.0, 1.2}});
}
