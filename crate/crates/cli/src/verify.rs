//! The built-in invariant suite behind `lab verify`.

pub const SUITE: &[(&str, &str)] = &[
    ("metric-tree", "kind = \"metric-props\"\nbackend = \"tree\"\nsamples = 2000\nradius = 10\nseed = 1\n"),
    ("metric-farey", "kind = \"metric-props\"\nbackend = \"farey\"\nsamples = 500\nradius = 8\nseed = 2\n"),
    (
        "halfspace-tree",
        "kind = \"halfspace-props\"\nbackend = \"tree\"\nradius = 8\nanchor-radius = 4\nn = [12]\nseed = 3\n",
    ),
    ("halfspace-farey", "kind = \"halfspace-props\"\nbackend = \"farey\"\nradius = 6\nanchor-radius = 1\nseed = 4\n"),
    ("drift-tree", "kind = \"drift\"\nbackend = \"tree\"\nn = [100, 500]\nsamples = 4000\nseed = 5\n"),
    ("drift-farey", "kind = \"drift\"\nbackend = \"farey\"\nn = [20, 50]\nsamples = 500\nseed = 6\n"),
    ("translation-tree", "kind = \"translation-growth\"\nbackend = \"tree\"\nn = [4000]\nsamples = 2000\nseed = 7\n"),
    ("independence-tree", "kind = \"independence\"\nbackend = \"tree\"\nn = [10, 100]\nsamples = 100000\nseed = 8\n"),
    ("measure-zero-tree", "kind = \"measure-zero\"\nbackend = \"tree\"\nn = [100]\nsamples = 200000\ndepth = 5\nseed = 9\n"),
    (
        "splitting-meridian",
        "kind = \"splitting-growth\"\nbackend = \"genus2\"\nwalk = \"meridian-twists\"\nn = [5, 10]\nsamples = 20\nseed = 10\n",
    ),
    (
        "splitting-humphries",
        "kind = \"splitting-growth\"\nbackend = \"genus2\"\nn = [10, 20, 40, 80]\nsamples = 100\nseed = 11\n",
    ),
    ("farey-verify", "kind = \"farey-verify\"\nbackend = \"farey\"\nmax-denominator = 30\nsamples = 2000\nseed = 12\n"),
];
