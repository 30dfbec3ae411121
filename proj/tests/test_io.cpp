#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "hazstereo/io/annotation.hpp"
#include "hazstereo/io/bundle_io.hpp"
#include "hazstereo/io/csv.hpp"
#include "hazstereo/io/downsample.hpp"
#include "hazstereo/io/pfm.hpp"
#include "hazstereo/io/png_io.hpp"
#include "hazstereo/match/matchers.hpp"
#include "hazstereo/render/renderer.hpp"

#include "helpers.hpp"

using namespace hazstereo;
using namespace testutil;

namespace {

ImageF random_image(int w, int h, int c, std::mt19937& rng) {
    std::uniform_real_distribution<float> u(-100.f, 100.f);
    ImageF img(w, h, c);
    for (size_t i = 0; i < img.size(); ++i) img.data()[i] = u(rng);
    return img;
}

} // namespace

TEST_CASE("pfm round trips random float maps bit-exactly") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        int w = 1 + int(rng() % 13), h = 1 + int(rng() % 9);
        int c = (trial % 2) ? 3 : 1;
        ImageF img = random_image(w, h, c, rng);
        PfmImage back = read_pfm(write_pfm(img));
        CHECK(back.image == img);
    }
}

TEST_CASE("pfm preserves non-finite values") {
    ImageF img(3, 1, 1);
    img.at(0, 0) = std::numeric_limits<float>::infinity();
    img.at(1, 0) = -std::numeric_limits<float>::infinity();
    img.at(2, 0) = std::numeric_limits<float>::quiet_NaN();
    PfmImage back = read_pfm(write_pfm(img));
    CHECK(back.image.at(0, 0) == img.at(0, 0));
    CHECK(back.image.at(1, 0) == img.at(1, 0));
    uint32_t a, b;
    std::memcpy(&a, &back.image.at(2, 0), 4);
    std::memcpy(&b, &img.at(2, 0), 4);
    CHECK(a == b);
}

TEST_CASE("hand-built 1x1 pfm decodes to its float") {
    std::vector<uint8_t> bytes;
    const char* header = "Pf\n1 1\n-1\n";
    bytes.insert(bytes.end(), header, header + std::strlen(header));
    float v = 3.25f;
    uint8_t le[4];
    std::memcpy(le, &v, 4);
    bytes.insert(bytes.end(), le, le + 4);
    PfmImage img = read_pfm(bytes);
    CHECK(img.image.width() == 1);
    CHECK(img.image.height() == 1);
    CHECK(img.image.channels() == 1);
    CHECK(img.image.at(0, 0) == 3.25f);
}

TEST_CASE("big-endian pfm payload is byte-swapped on read") {
    std::vector<uint8_t> bytes;
    const char* header = "Pf\n1 1\n1\n";
    bytes.insert(bytes.end(), header, header + std::strlen(header));
    float v = 3.25f;
    uint8_t le[4];
    std::memcpy(le, &v, 4);
    bytes.push_back(le[3]);
    bytes.push_back(le[2]);
    bytes.push_back(le[1]);
    bytes.push_back(le[0]);
    PfmImage img = read_pfm(bytes);
    CHECK(img.image.at(0, 0) == 3.25f);
}

TEST_CASE("pfm rows are stored bottom-up") {
    ImageF img(1, 2, 1);
    img.at(0, 0) = 5.f; // top row
    img.at(0, 1) = 9.f; // bottom row
    std::vector<uint8_t> bytes = write_pfm(img);
    float first;
    std::memcpy(&first, bytes.data() + bytes.size() - 8, 4);
    CHECK(first == 9.f);
}

TEST_CASE("pfm header errors") {
    std::vector<uint8_t> bad;
    const char* header = "Pf\n0 1\n-1\n";
    bad.insert(bad.end(), header, header + std::strlen(header));
    try {
        read_pfm(bad);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedHeader);
    }

    ImageF img(2, 2, 1);
    img.fill(1.f);
    std::vector<uint8_t> bytes = write_pfm(img);
    bytes.resize(bytes.size() - 3);
    try {
        read_pfm(bytes);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::TruncatedPayload);
    }

    std::vector<uint8_t> junk = {'P', 'x', '\n'};
    try {
        read_pfm(junk);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedHeader);
    }
}

TEST_CASE("pfm file round trip") {
    std::string dir = scratch_dir("pfm_file");
    std::mt19937 rng(3);
    ImageF img = random_image(7, 5, 1, rng);
    write_pfm_file(dir + "/m.pfm", img);
    CHECK(read_pfm_file(dir + "/m.pfm") == img);
}

TEST_CASE("disparity png16 fixed-point convention") {
    ImageU16 raw(2, 1, 1);
    raw.at(0, 0) = 256; // 1.0 px
    raw.at(1, 0) = 0;   // invalid
    ImageF disp = read_disp_png16(encode_png16(raw));
    CHECK(disp.at(0, 0) == 1.0f);
    CHECK(disp.at(1, 0) == kInvalidDisparity);
}

TEST_CASE("disparity png16 quantizes to 1/256 px") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<float> u(0.f, 200.f);
    ImageF disp(9, 7, 1);
    for (size_t i = 0; i < disp.size(); ++i) disp.data()[i] = u(rng);
    disp.at(0, 0) = -1.f; // invalid stays invalid
    ImageF back = read_disp_png16(write_disp_png16(disp));
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x) {
            float d = disp.at(x, y);
            float expect = d < 0.f ? kInvalidDisparity : std::round(d * 256.f) / 256.f;
            CHECK(back.at(x, y) == expect);
        }
    // already-quantized maps round trip exactly
    ImageF again = read_disp_png16(write_disp_png16(back));
    for (size_t i = 0; i < back.size(); ++i) {
        float b = back.data()[i];
        if (b >= 0.f) CHECK(again.data()[i] == b);
    }
}

TEST_CASE("png8 round trips gray and rgb") {
    std::mt19937 rng(5);
    ImageU8 gray(13, 6, 1), rgb(6, 9, 3);
    for (size_t i = 0; i < gray.size(); ++i) gray.data()[i] = uint8_t(rng());
    for (size_t i = 0; i < rgb.size(); ++i) rgb.data()[i] = uint8_t(rng());
    CHECK(decode_png8(encode_png8(gray)) == gray);
    CHECK(decode_png8(encode_png8(rgb)) == rgb);
}

TEST_CASE("png bit depth is checked") {
    ImageU8 gray(4, 4, 1);
    gray.fill(7);
    ImageU16 deep(4, 4, 1);
    deep.fill(300);
    try {
        decode_png16(encode_png8(gray));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::WrongBitDepth);
    }
    try {
        decode_png8(encode_png16(deep));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::WrongBitDepth);
    }
    std::vector<uint8_t> garbage = {1, 2, 3, 4, 5};
    try {
        decode_png8(garbage);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ParseError);
    }
}

TEST_CASE("mask files store 0/255 and read back as 0/1") {
    std::string dir = scratch_dir("mask_file");
    Mask m(5, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 5; ++x) m.at(x, y) = (x + y) % 2;
    write_mask_file(dir + "/m.png", m);
    CHECK(read_mask_file(dir + "/m.png") == m);
}

TEST_CASE("annotation masks from color keys") {
    ImageU8 img(10, 6, 3);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 10; ++x) {
            uint8_t g = uint8_t(40 + 3 * x);
            img.at(x, y, 0) = g; // grayscale background
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = g;
        }
    SUBCASE("all background decodes to empty masks") {
        AnnotationMasks ann = read_annotation_masks(img);
        CHECK(count_nonzero(ann.mask_for("specular")) == 0);
        CHECK(count_nonzero(ann.mask_for("textureless")) == 0);
        CHECK(ann.unknown_color_count == 0);
    }
    SUBCASE("10 red + 20 green pixels give masks of sizes 10 and 20") {
        int reds = 0, greens = 0;
        for (int x = 0; x < 10; ++x) {
            img.at(x, 0, 0) = 255;
            img.at(x, 0, 1) = 0;
            img.at(x, 0, 2) = 0;
            ++reds;
        }
        for (int y = 1; y <= 2; ++y)
            for (int x = 0; x < 10; ++x) {
                img.at(x, y, 0) = 0;
                img.at(x, y, 1) = 255;
                img.at(x, y, 2) = 0;
                ++greens;
            }
        img.at(0, 5, 0) = 10; // off-key color
        img.at(0, 5, 1) = 20;
        img.at(0, 5, 2) = 200;
        REQUIRE(reds == 10);
        REQUIRE(greens == 20);
        AnnotationMasks ann = read_annotation_masks(img);
        CHECK(count_nonzero(ann.mask_for("specular")) == 10);
        CHECK(count_nonzero(ann.mask_for("textureless")) == 20);
        CHECK(ann.unknown_color_count == 1);
        // masks are disjoint by construction: one color per pixel
        const Mask& a = ann.mask_for("specular");
        const Mask& b = ann.mask_for("textureless");
        for (size_t i = 0; i < a.size(); ++i) CHECK((a.data()[i] & b.data()[i]) == 0);
    }
    SUBCASE("tolerance admits near-key colors") {
        img.at(3, 3, 0) = 254;
        img.at(3, 3, 1) = 1;
        img.at(3, 3, 2) = 0;
        AnnotationMasks strict = read_annotation_masks(img);
        CHECK(count_nonzero(strict.mask_for("specular")) == 0);
        CHECK(strict.unknown_color_count == 1);
        AnnotationMasks loose = read_annotation_masks(img, default_annotation_keys(), 2);
        CHECK(count_nonzero(loose.mask_for("specular")) == 1);
        CHECK(loose.unknown_color_count == 0);
    }
    SUBCASE("png byte path matches image path") {
        img.at(2, 2, 0) = 255;
        img.at(2, 2, 1) = 0;
        img.at(2, 2, 2) = 0;
        AnnotationMasks direct = read_annotation_masks(img);
        AnnotationMasks via_png = read_annotation_masks(encode_png8(img));
        CHECK(direct.mask_for("specular") == via_png.mask_for("specular"));
    }
}

TEST_CASE("csv quoting round trips awkward cells") {
    CsvWriter w({"name", "value"});
    w.add_row({"plain", "1"});
    w.add_row({"comma, inside", "2"});
    w.add_row({"quote \" inside", "3"});
    w.add_row({"line\nbreak", "4"});
    CsvTable t = parse_csv(w.str());
    REQUIRE(t.header.size() == 2);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[1][0] == "comma, inside");
    CHECK(t.rows[2][0] == "quote \" inside");
    CHECK(t.rows[3][0] == "line\nbreak");
    CHECK(t.column("value") == 1);
    CHECK(t.column("absent") == -1);
}

TEST_CASE("csv writer rejects wrong arity") {
    CsvWriter w({"a", "b"});
    try {
        w.add_row({"only one"});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ShapeMismatch);
    }
}

TEST_CASE("format_float emits shortest exact decimal") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<float> u(-1e4f, 1e4f);
    for (int i = 0; i < 200; ++i) {
        float v = u(rng);
        CHECK(std::stof(format_float(v)) == v);
    }
    CHECK(format_float(1.f) == "1");
    CHECK(format_float(0.5f) == "0.5");
    std::uniform_real_distribution<double> ud(-1e8, 1e8);
    for (int i = 0; i < 200; ++i) {
        double v = ud(rng);
        CHECK(std::stod(format_float(v)) == v);
    }
}

TEST_CASE("downsampling") {
    ImageF img(4, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.at(x, y) = float(y * 4 + x);

    SUBCASE("nearest picks the top-left sample of each cell") {
        ImageF d = downsample_nearest(img, 2);
        REQUIRE(d.width() == 2);
        REQUIRE(d.height() == 2);
        CHECK(d.at(0, 0) == 0.f);
        CHECK(d.at(1, 0) == 2.f);
        CHECK(d.at(0, 1) == 8.f);
        CHECK(d.at(1, 1) == 10.f);
    }
    SUBCASE("area averages each cell") {
        ImageF d = downsample_area(img, 2);
        CHECK(d.at(0, 0) == doctest::Approx((0 + 1 + 4 + 5) / 4.0));
        CHECK(d.at(1, 1) == doctest::Approx((10 + 11 + 14 + 15) / 4.0));
    }
    SUBCASE("factor must divide dimensions") {
        try {
            downsample_nearest(img, 3);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ShapeMismatch);
        }
    }
    SUBCASE("factor 1 is identity") { CHECK(downsample_area(img, 1) == img); }
    SUBCASE("disparity values rescale into output pixel units") {
        ImageF disp(4, 2, 1);
        disp.fill(8.f);
        disp.at(0, 0) = kInvalidDisparity;
        ImageF nd = downsample_disparity(disp, 2, false);
        CHECK(nd.at(0, 0) == kInvalidDisparity); // nearest keeps the sentinel
        CHECK(nd.at(1, 0) == 4.f);
        ImageF ad = downsample_disparity(disp, 2, true);
        CHECK(ad.at(0, 0) == 4.f); // area averages the valid samples only
        CHECK(ad.at(1, 0) == 4.f);
        ImageF all_bad(2, 2, 1);
        all_bad.fill(kInvalidDisparity);
        CHECK(downsample_disparity(all_bad, 2, true).at(0, 0) == kInvalidDisparity);
    }
}

TEST_CASE("bundle saves and loads") {
    std::string dir = scratch_dir("bundle_io");
    SceneGraph scene = plane_scene(3.f);
    StereoRig rig;
    rig.width = 64;
    rig.height = 48;
    rig.cx = 31.5f;
    rig.cy = 23.5f;
    RenderSettings settings;
    FrameBundle bundle = render_stereo(scene, rig, origin_pose(), settings);
    save_bundle(bundle, dir);
    FrameBundle back = load_bundle(dir);

    CHECK(back.left.display == bundle.left.display);
    CHECK(back.right.display == bundle.right.display);
    CHECK(back.left.depth == bundle.left.depth);
    CHECK(back.left.disparity == bundle.left.disparity);
    CHECK(back.left.instance == bundle.left.instance);
    CHECK(back.left.flags == bundle.left.flags);
    CHECK(back.left.budget_exceeded == bundle.left.budget_exceeded);
    CHECK(back.rig.focal_px == bundle.rig.focal_px);
    CHECK(back.rig.width == bundle.rig.width);
    CHECK(back.seed == bundle.seed);

    // linear rgb comes back through the display encode, not bit-exact
    REQUIRE(back.left.rgb.width() == bundle.left.rgb.width());
    float gamma = settings.gamma;
    for (int i = 0; i < 30; ++i) {
        int x = i % 64, y = (i * 7) % 48;
        float expect = std::pow(bundle.left.display.at(x, y, 0) / 255.f, gamma);
        CHECK(back.left.rgb.at(x, y, 0) == doctest::Approx(expect).epsilon(1e-5));
    }
}

TEST_CASE("estimate saves and loads exactly") {
    std::string dir = scratch_dir("estimate_io");
    std::mt19937 rng(7);
    std::uniform_real_distribution<float> u(0.f, 50.f);
    ImageF disp(11, 8, 1);
    Mask valid(11, 8, 1);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 11; ++x) {
            disp.at(x, y) = u(rng);
            valid.at(x, y) = (rng() % 4) ? 1 : 0;
        }
    DisparityEstimate est = make_estimate(disp, valid, "unit");
    save_estimate(est, dir + "/est");
    DisparityEstimate back = load_estimate(dir + "/est");
    CHECK(back.disparity == est.disparity);
    CHECK(back.validity == est.validity);
    CHECK(back.method == "unit");
}

TEST_CASE("masks save and load") {
    std::string dir = scratch_dir("masks_io");
    std::mt19937 rng(9);
    HazardMasks masks;
    auto rm = [&] {
        Mask m(6, 5, 1);
        for (size_t i = 0; i < m.size(); ++i) m.data()[i] = rng() % 2;
        return m;
    };
    masks.specular = rm();
    masks.transparent = rm();
    masks.textureless = rm();
    masks.disparity_jump = rm();
    masks.boundary = rm();
    masks.nonoccluded = rm();
    masks.params.window = 7;
    masks.params.grad_thresh = 0.02f;
    save_masks(masks, dir);
    HazardMasks back = load_masks(dir);
    CHECK(back.specular == masks.specular);
    CHECK(back.transparent == masks.transparent);
    CHECK(back.textureless == masks.textureless);
    CHECK(back.disparity_jump == masks.disparity_jump);
    CHECK(back.boundary == masks.boundary);
    CHECK(back.nonoccluded == masks.nonoccluded);
    CHECK(back.params.window == 7);
    CHECK(back.params.grad_thresh == 0.02f);
}
