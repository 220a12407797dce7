#include <random>
#include <set>

#include "doctest.h"

#include "bulbar/core/annotations.hpp"
#include "bulbar/core/fileio.hpp"
#include "bulbar/core/instances.hpp"
#include "bulbar/core/landmarks_io.hpp"
#include "bulbar/core/manifest.hpp"
#include "bulbar/core/slicing.hpp"
#include "bulbar/core/wav.hpp"
#include "bulbar/error.hpp"
#include "support/helpers.hpp"

using namespace bulbar;
using bulbar::testing::TempDir;

namespace {

const char* kMinimalManifest = R"({
  "subjects": [
    {"id": "P1", "group": "ALS", "scores": [[1,1,1,1,1],[1,1,1,1,1]],
     "recordings": [{"audio_wav": "p1.wav", "landmarks_csv": null,
                     "annotations_csv": null, "transcripts_txt": null}]}
  ]
})";

std::vector<char> stereo_wav() {
    AudioClip mono;
    mono.sample_rate = 16000;
    mono.samples.assign(4, 0.0);
    std::vector<char> bytes = encode_wav(mono);
    bytes[22] = 2;  // channel count
    return bytes;
}

}  // namespace

TEST_CASE("minimal manifest yields one subject with target 5") {
    const DatasetManifest m = parse_manifest(kMinimalManifest, "/data");
    REQUIRE(m.subjects.size() == 1);
    CHECK(m.subjects[0].record.subject_id == "P1");
    CHECK(m.subjects[0].record.group == Group::ALS);
    CHECK(m.subjects[0].record.target() == 5.0);
    REQUIRE(m.subjects[0].recordings.size() == 1);
    CHECK(m.subjects[0].recordings[0].audio_wav == std::optional<std::string>("p1.wav"));
    CHECK_FALSE(m.subjects[0].recordings[0].landmarks_csv.has_value());
    CHECK(m.resolve("p1.wav") == std::filesystem::path("/data/p1.wav"));
}

TEST_CASE("manifest errors") {
    SUBCASE("missing scores block") {
        CHECK_THROWS_AS(parse_manifest(R"({"subjects":[{"id":"P1","group":"HC"}]})", "."), ValidationError);
    }
    SUBCASE("sub-score out of range") {
        CHECK_THROWS_AS(
            parse_manifest(R"({"subjects":[{"id":"P1","group":"HC","scores":[[1,1,1,1,6],[1,1,1,1,1]]}]})", "."),
            ValidationError);
    }
    SUBCASE("syntax error carries the line") {
        try {
            parse_manifest("{\n  \"subjects\": [\n  ,\n]}", ".");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("unknown group") {
        CHECK_THROWS_AS(
            parse_manifest(R"({"subjects":[{"id":"P1","group":"X","scores":[[1,1,1,1,1],[1,1,1,1,1]]}]})", "."),
            ValidationError);
    }
    SUBCASE("landmarks without frame rate") {
        CHECK_THROWS_AS(parse_manifest(R"({"subjects":[{"id":"P1","group":"HC","scores":[[1,1,1,1,1],[1,1,1,1,1]],
            "recordings":[{"landmarks_csv":"a.csv"}]}]})", "."),
                        ValidationError);
    }
    SUBCASE("duplicate ids") {
        CHECK_THROWS_AS(parse_manifest(R"({"subjects":[
            {"id":"P1","group":"HC","scores":[[1,1,1,1,1],[1,1,1,1,1]]},
            {"id":"P1","group":"HC","scores":[[1,1,1,1,1],[1,1,1,1,1]]}]})", "."),
                        ValidationError);
    }
    SUBCASE("missing file is an I/O error") {
        CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.json"), IoError);
    }
}

TEST_CASE("manifest round-trips through serialization") {
    DatasetManifest m;
    m.base_dir = "/base";
    m.reference_text = "buy bobby a puppy";
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> score(1, 5);
    for (int s = 0; s < 4; ++s) {
        SubjectEntry e;
        e.record.subject_id = "S" + std::to_string(s);
        e.record.group = s % 2 ? Group::ALS : Group::HC;
        for (auto& rater : e.record.rater_scores) {
            for (auto& v : rater) v = score(rng);
        }
        Recording r;
        r.audio_wav = "a.wav";
        r.landmarks_csv = "l.csv";
        r.frame_rate = 29.97;
        r.annotations_csv = s == 0 ? std::nullopt : std::optional<std::string>("x.csv");
        e.recordings.push_back(r);
        m.subjects.push_back(e);
    }
    const std::string text = serialize_manifest(m);
    const DatasetManifest back = parse_manifest(text, "/base");
    CHECK(back == m);
    CHECK(serialize_manifest(back) == text);
}

TEST_CASE("target formula over random valid scores") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> score(1, 5);
    for (int trial = 0; trial < 2000; ++trial) {
        SubjectRecord r;
        r.subject_id = "x";
        for (auto& rater : r.rater_scores) {
            for (auto& v : rater) v = score(rng);
        }
        const double t = r.target();
        CHECK(t >= 5.0);
        CHECK(t <= 25.0);
        CHECK(2.0 * t == std::floor(2.0 * t));
    }
}

TEST_CASE("wav decoding") {
    SUBCASE("one second of silence") {
        AudioClip clip = bulbar::testing::silence(1.0);
        const AudioClip back = decode_wav(encode_wav(clip));
        CHECK(back.sample_rate == 16000);
        REQUIRE(back.samples.size() == 16000);
        for (double s : back.samples) CHECK(s == 0.0);
    }
    SUBCASE("full-scale square wave scales by 1/32768") {
        AudioClip clip;
        clip.sample_rate = 8000;
        for (int i = 0; i < 100; ++i) clip.samples.push_back((i / 10) % 2 ? -32767.0 / 32768.0 : 32767.0 / 32768.0);
        const AudioClip back = decode_wav(encode_wav(clip));
        REQUIRE(back.samples.size() == 100);
        for (std::size_t i = 0; i < 100; ++i) {
            CHECK(std::abs(back.samples[i]) == 32767.0 / 32768.0);
            CHECK(back.samples[i] == clip.samples[i]);
        }
    }
    SUBCASE("stereo is unsupported") {
        CHECK_THROWS_AS(decode_wav(stereo_wav()), UnsupportedFormatError);
    }
    SUBCASE("non-PCM is unsupported") {
        auto bytes = encode_wav(bulbar::testing::silence(0.01));
        bytes[20] = 3;  // IEEE float
        CHECK_THROWS_AS(decode_wav(bytes), UnsupportedFormatError);
    }
    SUBCASE("truncated data is an I/O error") {
        auto bytes = encode_wav(bulbar::testing::silence(0.01));
        bytes.resize(bytes.size() - 10);
        CHECK_THROWS_AS(decode_wav(bytes), IoError);
        bytes.resize(8);
        CHECK_THROWS_AS(decode_wav(bytes), IoError);
    }
    SUBCASE("file round trip") {
        TempDir dir("core_wav");
        const AudioClip clip = bulbar::testing::sine(440.0, 0.5, 0.1);
        write_wav(clip, dir / "a.wav");
        const AudioClip back = load_audio(dir / "a.wav");
        REQUIRE(back.samples.size() == clip.samples.size());
        for (std::size_t i = 0; i < clip.samples.size(); ++i) {
            CHECK(std::abs(back.samples[i] - clip.samples[i]) <= 0.5 / 32768 + 1e-12);
        }
        CHECK_THROWS_AS(load_audio(dir / "missing.wav"), IoError);
    }
}

TEST_CASE("landmark CSV") {
    auto csv_for = [](int frames, bool with_z, int points_in_last = 68) {
        std::string s = with_z ? "frame,idx,x,y,z\n" : "frame,idx,x,y\n";
        for (int f = 0; f < frames; ++f) {
            const int n = f == frames - 1 ? points_in_last : 68;
            for (int i = 0; i < n; ++i) {
                s += std::to_string(f) + "," + std::to_string(i) + "," + std::to_string(i * 0.5) + "," +
                     std::to_string(f + 0.25);
                if (with_z) s += ",1.5";
                s += "\n";
            }
        }
        return s;
    };
    SUBCASE("two frames") {
        const LandmarkTrack t = parse_landmarks(csv_for(2, true), 30.0);
        CHECK(t.size() == 2);
        CHECK(t.frames[1][4][0] == 2.0);
        CHECK(t.frames[1][4][1] == 1.25);
        CHECK(t.frames[1][4][2] == 1.5);
    }
    SUBCASE("missing z column gives z = 0") {
        const LandmarkTrack t = parse_landmarks(csv_for(2, false), 30.0);
        for (const auto& f : t.frames) {
            for (const auto& p : f) CHECK(p[2] == 0.0);
        }
    }
    SUBCASE("frame with 67 points names the frame") {
        try {
            parse_landmarks(csv_for(3, true, 67), 30.0);
            FAIL("expected a schema error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("frame 2") != std::string::npos);
        }
    }
    SUBCASE("non-finite coordinate") {
        std::string s = csv_for(1, false);
        s.replace(s.find("0,0,0.000000,0.250000"), 21, "0,0,nan,0.250000");
        CHECK_THROWS_AS(parse_landmarks(s, 30.0), ValidationError);
    }
    SUBCASE("format round trip") {
        const LandmarkTrack t = parse_landmarks(csv_for(3, true), 25.0);
        const LandmarkTrack back = parse_landmarks(format_landmarks(t), 25.0);
        CHECK(back.frames == t.frames);
    }
}

TEST_CASE("annotations") {
    const auto spans = parse_annotations("rep,onset_s,offset_s\n2,1.5,2.5\n1,0.1,1.0\n");
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].index == 1);
    CHECK(spans[1].onset_s == 1.5);
    CHECK_THROWS_AS(parse_annotations("rep,onset_s,offset_s\n1,0.5,0.4\n"), ValidationError);
    CHECK_THROWS_AS(parse_annotations("rep,onset_s,offset_s\n1,0,1\n2,0.5,1.5\n"), ValidationError);
    CHECK_THROWS_AS(parse_annotations("rep,onset,offset\n1,0,1\n"), ParseError);
    CHECK_THROWS_AS(parse_annotations("rep,onset_s,offset_s\n1,zero,1\n"), ParseError);
    CHECK(parse_annotations(format_annotations(spans)) == spans);
}

TEST_CASE("slice_spans") {
    const AudioClip clip = bulbar::testing::sine(100.0, 0.5, 2.0);
    SUBCASE("span [0.5, 1.0) at 16 kHz covers samples 8000..15999") {
        const IndexRange r = span_indices({1, 0.5, 1.0}, 16000, clip.size());
        CHECK(r.begin == 8000);
        CHECK(r.end == 16000);
        const auto segs = slice_spans(clip, {{1, 0.5, 1.0}});
        REQUIRE(segs.size() == 1);
        REQUIRE(segs[0].samples.size() == 8000);
        CHECK(segs[0].samples.front() == clip.samples[8000]);
        CHECK(segs[0].samples.back() == clip.samples[15999]);
    }
    SUBCASE("empty span list") { CHECK(slice_spans(clip, {}).empty()); }
    SUBCASE("overlap") { CHECK_THROWS_AS(slice_spans(clip, {{1, 0.0, 1.0}, {2, 0.5, 1.5}}), ValidationError); }
    SUBCASE("beyond the end") { CHECK_THROWS_AS(slice_spans(clip, {{1, 1.5, 2.5}}), RangeError); }
    SUBCASE("contiguous spans partition the covered region") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            std::uniform_real_distribution<double> cut(0.0, 2.0);
            std::vector<double> edges{cut(rng), cut(rng), cut(rng), cut(rng)};
            std::sort(edges.begin(), edges.end());
            if (edges[1] - edges[0] < 1e-3 || edges[2] - edges[1] < 1e-3 || edges[3] - edges[2] < 1e-3) continue;
            std::vector<RepetitionSpan> spans{{1, edges[0], edges[1]}, {2, edges[1], edges[2]}, {3, edges[2], edges[3]}};
            std::vector<double> joined;
            for (const auto& s : slice_spans(clip, spans)) joined.insert(joined.end(), s.samples.begin(), s.samples.end());
            const auto whole = slice_spans(clip, {{1, edges[0], edges[3]}});
            CHECK(joined == whole[0].samples);
        }
    }
    SUBCASE("landmark tracks use k / frame_rate") {
        LandmarkTrack t;
        t.frame_rate = 10.0;
        t.frames.resize(20);
        for (std::size_t f = 0; f < 20; ++f) t.frames[f][0][0] = static_cast<double>(f);
        const auto segs = slice_spans(t, {{1, 0.25, 0.9}});
        REQUIRE(segs[0].size() == 6);
        CHECK(segs[0].frames[0][0][0] == 3.0);
        CHECK(segs[0].frames[5][0][0] == 8.0);
    }
}

namespace {

SubjectFeatures subject_with(const std::string& id, std::set<int> audio_reps, std::set<int> video_reps) {
    SubjectFeatures s;
    s.subject_id = id;
    s.target = 12.5;
    for (int r : audio_reps) s.audio[r].fill(static_cast<double>(r));
    for (int r : video_reps) s.video[r].fill(-static_cast<double>(r));
    return s;
}

std::set<std::pair<std::string, int>> keys(const std::vector<Instance>& v) {
    std::set<std::pair<std::string, int>> out;
    for (const auto& i : v) out.insert({i.subject_id, i.repetition});
    return out;
}

}  // namespace

TEST_CASE("reconcile_instances") {
    SUBCASE("10 audio and 10 video repetitions give 9 multimodal instances") {
        std::set<int> all{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        const auto inst = reconcile_instances({subject_with("A", all, all)}, Modality::Multimodal);
        CHECK(inst.size() == 9);
        for (const auto& i : inst) {
            CHECK(i.repetition >= 2);
            CHECK(i.features(Modality::Multimodal).size() == 33);
            CHECK(i.target == 12.5);
        }
    }
    SUBCASE("audio-only subject is absent from multimodal") {
        const std::vector<SubjectFeatures> subjects{subject_with("A", {1, 2, 3}, {}),
                                                    subject_with("B", {1, 2, 3}, {1, 2, 3})};
        CHECK(keys(reconcile_instances(subjects, Modality::Audio)).count({"A", 2}) == 1);
        for (const auto& i : reconcile_instances(subjects, Modality::Multimodal)) CHECK(i.subject_id == "B");
    }
    SUBCASE("set intersection") {
        const auto inst = reconcile_instances({subject_with("A", {2, 3, 4, 5, 6, 7, 8, 9, 10}, {2, 3, 4, 5, 6, 7, 8})},
                                              Modality::Multimodal);
        std::set<int> reps;
        for (const auto& i : inst) reps.insert(i.repetition);
        CHECK(reps == std::set<int>{2, 3, 4, 5, 6, 7, 8});
    }
    SUBCASE("template repetition in video mode follows the option") {
        const std::vector<SubjectFeatures> s{subject_with("A", {}, {1, 2})};
        CHECK(reconcile_instances(s, Modality::Video).size() == 1);
        CHECK(reconcile_instances(s, Modality::Video, {.exclude_template_in_video = false}).size() == 2);
    }
    SUBCASE("empty result is an error") {
        CHECK_THROWS_AS(reconcile_instances({subject_with("A", {1}, {})}, Modality::Audio), ValidationError);
    }
    SUBCASE("multimodal keys are a subset of audio and video keys") {
        std::mt19937_64 rng(9);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<SubjectFeatures> subjects;
            for (int s = 0; s < 4; ++s) {
                std::set<int> a, v;
                for (int r = 1; r <= 10; ++r) {
                    if (rng() % 3) a.insert(r);
                    if (rng() % 3) v.insert(r);
                }
                a.insert(5);
                v.insert(5);
                subjects.push_back(subject_with("S" + std::to_string(s), a, v));
            }
            const auto mm = keys(reconcile_instances(subjects, Modality::Multimodal));
            const auto au = keys(reconcile_instances(subjects, Modality::Audio));
            const auto vi = keys(reconcile_instances(subjects, Modality::Video));
            for (const auto& k : mm) {
                CHECK(au.count(k) == 1);
                CHECK(vi.count(k) == 1);
            }
        }
    }
}

TEST_CASE("feature name tables") {
    CHECK(feature_names(Modality::Audio).size() == 18);
    CHECK(feature_names(Modality::Video).size() == 15);
    CHECK(feature_names(Modality::Multimodal).size() == 33);
    CHECK(feature_names(Modality::Multimodal)[18] == "path_lower_lip");
    CHECK(parse_modality("video") == Modality::Video);
    CHECK_THROWS_AS(parse_modality("both"), ValidationError);
}

TEST_CASE("strict number parsing") {
    CHECK(parse_double(" 1.5 ", "x") == 1.5);
    CHECK_THROWS_AS(parse_double("1.5abc", "x"), ParseError);
    CHECK(parse_int("42", "x") == 42);
    CHECK_THROWS_AS(parse_int("4.2", "x"), ParseError);
    CHECK(split_lines("a\r\nb\n") == std::vector<std::string>{"a", "b"});
}
